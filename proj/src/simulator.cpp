#include "pqr/simulator.hpp"

#include <algorithm>
#include <map>

#include "pqr/errors.hpp"
#include "pqr/metrics.hpp"

namespace pqr {

SimPolicy SimPolicy::from_name(const std::string& name, uint64_t seed) {
  if (name == "oracle") return {Kind::oracle, seed};
  if (name == "random") return {Kind::random, seed};
  throw UsageError("unknown policy: " + name + " (expected oracle or random)");
}

std::vector<double> score_queries(const Index& index, const std::vector<Query>& queries,
                                  const std::string& qid, const ResultList& pool,
                                  const SimPolicy& policy, const QrelSet& qrels,
                                  const RetrievalParams& rp, Rng& rng, int k) {
  std::vector<double> scores;
  scores.reserve(queries.size());
  for (const Query& q : queries) {
    if (policy.kind == SimPolicy::Kind::random) {
      scores.push_back(rng.uniform());
    } else {
      ResultList r = rerank(index, q, pool, rp);
      scores.push_back(ndcg_at_k(r, qrels, k));
    }
  }
  return scores;
}

namespace {

// Ten most frequent terms across the top-10 result documents, skipping terms
// already in the query. Frequency is summed term frequency within those
// documents; ties break by term text.
std::vector<std::string> frequent_result_terms(const Index& index, const Query& q,
                                               const ResultList& results, int n_terms,
                                               int n_docs) {
  std::map<TermId, int64_t> counts;
  size_t depth = std::min<size_t>(results.entries.size(), static_cast<size_t>(n_docs));
  for (size_t i = 0; i < depth; ++i) {
    auto d = index.doc_idx(results.entries[i].docid);
    if (!d) throw DataError("result docid not in index: " + results.entries[i].docid);
    for (const auto& [t, tf] : index.doc(*d).terms) counts[t] += tf;
  }
  std::vector<std::pair<TermId, int64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return index.term(a.first).text < index.term(b.first).text;
  });
  std::vector<std::string> out;
  for (const auto& [t, c] : ranked) {
    if (static_cast<int>(out.size()) == n_terms) break;
    const std::string& text = index.term(t).text;
    if (q.contains(text)) continue;
    out.push_back(text);
  }
  return out;
}

}  // namespace

SimResult qr_sim(const Index& index, const std::string& qid, const Query& q0,
                 const QrelSet& qrels, int maxd, const SimPolicy& policy,
                 const RetrievalParams& rp) {
  if (maxd < 1) throw UsageError("maxd must be >= 1");
  rp.validate();

  SimResult result{q0, {}};
  RetrievalParams pool_rp = rp;
  pool_rp.k = rp.pool_size;
  ResultList pool = retrieve(index, q0, pool_rp);
  pool.qid = qid;
  if (pool.empty()) {
    result.path.push_back({q0, 0.0});
    return result;
  }

  Rng rng(derive_seed(policy.seed, qid));
  Query q = q0;
  ResultList results = pool;
  result.path.push_back({q, ndcg_at_k(results, qrels, 30)});

  for (int depth = 0; depth < maxd; ++depth) {
    std::vector<Query> candidates;
    if (q.size() > 1)
      for (const auto& term : q.terms()) candidates.push_back(q.without(term));
    for (const auto& term : frequent_result_terms(index, q, results, 10, 10))
      candidates.push_back(q.with(term));
    candidates.push_back(q);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<double> scores =
        score_queries(index, candidates, qid, pool, policy, qrels, rp, rng, 30);

    // Argmax with deterministic ties: prefer staying at q, then canonical
    // query order, so a locally optimal query terminates the walk.
    size_t best = 0;
    for (size_t i = 1; i < scores.size(); ++i) {
      bool better = scores[i] > scores[best];
      bool tie = scores[i] == scores[best];
      bool prefer_current = tie && candidates[i] == q && !(candidates[best] == q);
      bool canonical = tie && !(candidates[best] == q) && candidates[i] < candidates[best];
      if (better || prefer_current || canonical) best = i;
    }
    if (candidates[best] == q) break;
    q = candidates[best];
    results = rerank(index, q, pool, rp);
    result.path.push_back({q, ndcg_at_k(results, qrels, 30)});
  }
  result.final_query = q;
  return result;
}

}  // namespace pqr
