#include "pqr/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pqr/errors.hpp"
#include "pqr/util.hpp"

namespace pqr {

Query::Query(std::vector<std::string> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end());
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  if (terms_.empty()) throw DataError("query must contain at least one term");
}

bool Query::contains(const std::string& term) const {
  return std::binary_search(terms_.begin(), terms_.end(), term);
}

Query Query::without(const std::string& term) const {
  std::vector<std::string> t;
  t.reserve(terms_.size());
  for (const auto& w : terms_)
    if (w != term) t.push_back(w);
  return Query(std::move(t));
}

Query Query::with(const std::string& term) const {
  std::vector<std::string> t = terms_;
  t.push_back(term);
  return Query(std::move(t));
}

std::string Query::joined(char sep) const {
  std::string out;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (i) out.push_back(sep);
    out += terms_[i];
  }
  return out;
}

void RetrievalParams::validate() const {
  if (!(mu > 0)) throw UsageError("mu must be > 0");
  if (k < 1) throw UsageError("k must be >= 1");
  if (pool_size < 1) throw UsageError("pool_size must be >= 1");
}

const LanguageModel& DocLmCache::get(DocIdx d) {
  auto it = cache_.find(d);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(d, index_.doc_lm(d)).first->second;
}

namespace {

struct ResolvedTerm {
  TermId id;
  double p_collection;
};

// Query terms present in the collection, with their collection probabilities.
std::vector<ResolvedTerm> resolve_terms(const Index& index, const Query& query) {
  std::vector<ResolvedTerm> out;
  out.reserve(query.size());
  double total = static_cast<double>(index.total_terms());
  for (const auto& w : query.terms()) {
    auto t = index.term_id(w);
    if (!t) continue;
    out.push_back({*t, static_cast<double>(index.term(*t).cf) / total});
  }
  return out;
}

double score_resolved(const Index& index, std::span<const ResolvedTerm> terms, DocIdx d,
                      double mu) {
  double len = static_cast<double>(index.doc(d).length);
  double score = 0;
  for (const auto& t : terms) {
    double tf = static_cast<double>(index.tf(t.id, d));
    score += std::log((tf + mu * t.p_collection) / (len + mu));
  }
  return score;
}

void sort_scored(std::vector<std::pair<DocIdx, double>>& scored, const Index& index) {
  std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return index.docid(a.first) < index.docid(b.first);
  });
}

}  // namespace

double score_ql(const Index& index, const Query& query, const std::string& docid, double mu) {
  auto d = index.doc_idx(docid);
  if (!d) throw DataError("unknown docid: " + docid);
  return score_resolved(index, resolve_terms(index, query), *d, mu);
}

ResultList retrieve(const Index& index, const Query& query, const RetrievalParams& params) {
  params.validate();
  auto terms = resolve_terms(index, query);

  // Candidate documents: union of the query terms' postings.
  std::vector<DocIdx> candidates;
  for (const auto& t : terms)
    for (const auto& [d, tf] : index.term(t.id).postings) candidates.push_back(d);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<std::pair<DocIdx, double>> scored;
  scored.reserve(candidates.size());
  for (DocIdx d : candidates) scored.emplace_back(d, score_resolved(index, terms, d, params.mu));
  sort_scored(scored, index);
  if (scored.size() > static_cast<size_t>(params.k)) scored.resize(params.k);

  ResultList out;
  out.provenance = Provenance::full_retrieval;
  out.entries.reserve(scored.size());
  for (const auto& [d, s] : scored) out.entries.push_back({index.docid(d), s});
  return out;
}

ResultList rerank(const Index& index, const Query& query, const ResultList& pool,
                  const RetrievalParams& params) {
  if (pool.empty()) throw DataError("rerank requires a non-empty pool");
  auto terms = resolve_terms(index, query);

  std::vector<std::pair<DocIdx, double>> scored;
  std::vector<DocIdx> tail;  // no term overlap; keeps pool order
  scored.reserve(pool.entries.size());
  for (const auto& e : pool.entries) {
    auto d = index.doc_idx(e.docid);
    if (!d) throw DataError("pool docid not in index: " + e.docid);
    bool overlap = false;
    for (const auto& t : terms)
      if (index.tf(t.id, *d) > 0) {
        overlap = true;
        break;
      }
    if (overlap)
      scored.emplace_back(*d, score_resolved(index, terms, *d, params.mu));
    else
      tail.push_back(*d);
  }
  sort_scored(scored, index);

  ResultList out;
  out.qid = pool.qid;
  out.provenance = Provenance::rerank;
  out.entries.reserve(pool.entries.size());
  for (const auto& [d, s] : scored) out.entries.push_back({index.docid(d), s});
  // Placeholder scores keep the list monotone and the tail order stable.
  double anchor = scored.empty() ? 0.0 : scored.back().second;
  for (size_t j = 0; j < tail.size(); ++j)
    out.entries.push_back({index.docid(tail[j]), anchor - 1.0 - static_cast<double>(j)});
  return out;
}

LanguageModel relevance_model(const Index& index, const ResultList& results, int fb_docs,
                              DocLmCache* cache) {
  if (results.empty()) throw DataError("relevance model requires non-empty results");
  size_t depth = std::min<size_t>(results.entries.size(), static_cast<size_t>(fb_docs));

  double max_score = results.entries[0].score;
  for (size_t i = 0; i < depth; ++i) max_score = std::max(max_score, results.entries[i].score);
  std::vector<double> weights(depth);
  double wsum = 0;
  for (size_t i = 0; i < depth; ++i) {
    weights[i] = std::exp(results.entries[i].score - max_score);
    wsum += weights[i];
  }

  std::map<TermId, double> mix;
  for (size_t i = 0; i < depth; ++i) {
    auto d = index.doc_idx(results.entries[i].docid);
    if (!d) throw DataError("result docid not in index: " + results.entries[i].docid);
    double w = weights[i] / wsum;
    LanguageModel local;
    const LanguageModel& lm = cache ? cache->get(*d) : (local = index.doc_lm(*d));
    for (const auto& [t, p] : lm.probs) mix[t] += w * p;
  }

  LanguageModel out;
  out.probs.assign(mix.begin(), mix.end());
  return out;
}

ResultList rm3_retrieve(const Index& index, const Query& query, const RetrievalParams& params,
                        int fb_docs, int fb_terms, double lambda) {
  params.validate();
  if (fb_docs < 1 || fb_terms < 1) throw UsageError("fb_docs and fb_terms must be >= 1");
  if (lambda < 0 || lambda > 1) throw UsageError("lambda must be in [0, 1]");

  RetrievalParams pool_params = params;
  pool_params.k = std::max(params.pool_size, params.k);
  ResultList pool = retrieve(index, query, pool_params);
  if (pool.empty()) {
    ResultList empty;
    empty.qid = pool.qid;
    return empty;
  }

  DocLmCache cache(index);
  LanguageModel rm = relevance_model(index, pool, fb_docs, &cache);

  // Keep the top fb_terms by probability (ties by term text) and renormalize.
  std::vector<std::pair<TermId, double>> kept = rm.probs;
  std::sort(kept.begin(), kept.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return index.term(a.first).text < index.term(b.first).text;
  });
  if (kept.size() > static_cast<size_t>(fb_terms)) kept.resize(fb_terms);
  double kept_mass = 0;
  for (const auto& [t, p] : kept) kept_mass += p;

  // p'(w) = lambda * MLE(query) + (1 - lambda) * truncated RM.
  std::map<TermId, double> weighted;
  double mle = 1.0 / static_cast<double>(query.size());
  for (const auto& w : query.terms()) {
    auto t = index.term_id(w);
    if (t) weighted[*t] += lambda * mle;
  }
  if (kept_mass > 0)
    for (const auto& [t, p] : kept) weighted[t] += (1.0 - lambda) * p / kept_mass;

  double total = static_cast<double>(index.total_terms());
  std::vector<std::pair<DocIdx, double>> scored;
  scored.reserve(pool.entries.size());
  for (const auto& e : pool.entries) {
    DocIdx d = *index.doc_idx(e.docid);
    double len = static_cast<double>(index.doc(d).length);
    double s = 0;
    for (const auto& [t, pw] : weighted) {
      double pc = static_cast<double>(index.term(t).cf) / total;
      double tf = static_cast<double>(index.tf(t, d));
      s += pw * std::log((tf + params.mu * pc) / (len + params.mu));
    }
    scored.emplace_back(d, s);
  }
  sort_scored(scored, index);
  if (scored.size() > static_cast<size_t>(params.k)) scored.resize(params.k);

  ResultList out;
  out.qid = pool.qid;
  out.provenance = Provenance::rerank;
  out.entries.reserve(scored.size());
  for (const auto& [d, s] : scored) out.entries.push_back({index.docid(d), s});
  return out;
}

}  // namespace pqr
