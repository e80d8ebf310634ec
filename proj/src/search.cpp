#include "pqr/search.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "pqr/errors.hpp"
#include "pqr/rng.hpp"
#include "pqr/util.hpp"

namespace pqr {

void SearchParams::validate() const {
  if (n < 1 || b < 1 || d < 1 || m < 1)
    throw UsageError("search parameters n, b, d, m must all be >= 1");
}

double RandomScorer::score(const Query& q, const ResultList&, const FeatureVector&) const {
  uint64_t h = mix64(seed_ ^ fnv1a(q.joined()));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<Query> generate_candidates(const Index& index, const Query& q,
                                       const ResultList& results, int n, DocLmCache* cache) {
  std::vector<Query> out;
  if (q.size() > 1)
    for (const auto& term : q.terms()) out.push_back(q.without(term));

  if (!results.empty() && n > 0) {
    LanguageModel rm = relevance_model(index, results, kFeedbackLmDepth, cache);
    std::vector<std::pair<TermId, double>> ranked = rm.probs;
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return index.term(a.first).text < index.term(b.first).text;
    });
    int taken = 0;
    for (const auto& [t, p] : ranked) {
      if (taken == n) break;
      const std::string& text = index.term(t).text;
      if (q.contains(text)) continue;
      out.push_back(q.with(text));
      ++taken;
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), q), out.end());
  return out;
}

std::vector<Query> RmCandidateSource::candidates(const Query& q, const ResultList& results) const {
  return generate_candidates(*index_, q, results, n_, cache_);
}

void SearchTrace::dump(std::ostream& out) const {
  out << "# pqr search trace v1\n";
  out << "# E depth parent candidate predicted expanded cache_hit\n";
  for (const auto& e : events)
    out << "E " << e.depth << ' ' << e.parent.joined('|') << ' ' << e.candidate.joined('|') << ' '
        << fmt_full(e.predicted) << ' ' << (e.expanded ? 1 : 0) << ' ' << (e.cache_hit ? 1 : 0)
        << '\n';
  for (const auto& [level, count] : generated_per_level) out << "L " << level << ' ' << count << '\n';
  // With constant query length L the generated count is exactly
  // ((b^d - 1) / (b - 1)) * (n + deletions(L)): one candidate batch per
  // expansion, expansions forming a complete b-ary tree of height d.
  out << "S expansions=" << expansions << " generated=" << generated
      << " unique=" << unique_evaluations << '\n';
}

void SearchTrace::dump_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write trace file: " + path);
  dump(out);
}

namespace {

struct SearchState {
  const Index& index;
  const Query& q0;
  const ResultList& pool;
  const CandidateScorer& scorer;
  const SearchParams& sp;
  const RetrievalParams& rp;
  const CandidateSource& source;
  const VisitObserver& on_visit;
  DocLmCache& cache;
  std::map<Query, double> visited;
  SearchTrace trace;
};

void expand(SearchState& st, const Query& q, const ResultList& q_results, int depth) {
  if (depth == st.sp.d) return;
  ++st.trace.expansions;

  std::vector<Query> cands = st.source.candidates(q, q_results);
  std::vector<std::pair<Query, double>> scored;
  scored.reserve(cands.size());
  std::vector<size_t> event_at;  // trace event per candidate, for expanded flags
  event_at.reserve(cands.size());

  for (const Query& c : cands) {
    ++st.trace.generated;
    ++st.trace.generated_per_level[depth + 1];
    auto it = st.visited.find(c);
    double predicted;
    bool cache_hit = it != st.visited.end();
    if (cache_hit) {
      predicted = it->second;
    } else {
      ResultList r_c = rerank(st.index, c, st.pool, st.rp);
      FeatureVector fv =
          assemble(st.index, st.q0, st.pool, q, q_results, c, r_c, &st.cache);
      predicted = st.scorer.score(c, r_c, fv);
      st.visited.emplace(c, predicted);
      ++st.trace.unique_evaluations;
      if (st.on_visit) st.on_visit({c, depth + 1, q, fv, r_c, predicted});
    }
    event_at.push_back(st.trace.events.size());
    st.trace.events.push_back({depth + 1, q, c, predicted, false, cache_hit});
    scored.emplace_back(c, predicted);
  }

  // Recurse on the b best candidates of this node.
  std::vector<size_t> order(scored.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scored[a].second != scored[b].second) return scored[a].second > scored[b].second;
    return scored[a].first < scored[b].first;
  });
  size_t width = std::min<size_t>(st.sp.b, order.size());
  for (size_t i = 0; i < width; ++i) {
    size_t pick = order[i];
    st.trace.events[event_at[pick]].expanded = true;
    ResultList r = rerank(st.index, scored[pick].first, st.pool, st.rp);
    expand(st, scored[pick].first, r, depth + 1);
  }
}

}  // namespace

SearchOutcome query_search(const Index& index, const Query& q0, const ResultList& pool,
                           const CandidateScorer& scorer, const SearchParams& sp,
                           const RetrievalParams& rp, const CandidateSource* source,
                           const VisitObserver& on_visit, DocLmCache* cache) {
  sp.validate();
  rp.validate();
  if (pool.empty()) throw DataError("query_search requires a non-empty q0 pool");

  DocLmCache local_cache(index);
  DocLmCache& lm_cache = cache ? *cache : local_cache;
  RmCandidateSource default_source(index, sp.n, &lm_cache);
  const CandidateSource& src = source ? *source : default_source;

  SearchState st{index, q0, pool, scorer, sp, rp, src, on_visit, lm_cache, {}, {}};
  expand(st, q0, pool, 0);

  SearchOutcome out;
  out.top.assign(st.visited.begin(), st.visited.end());
  std::sort(out.top.begin(), out.top.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (out.top.size() > static_cast<size_t>(sp.m)) out.top.resize(sp.m);
  out.trace = std::move(st.trace);
  return out;
}

ResultList borda_merge(const std::vector<ResultList>& lists, const std::vector<double>& weights,
                       int k) {
  if (lists.empty() || lists.size() != weights.size())
    throw UsageError("borda_merge requires equally many lists and weights, at least one each");

  double wmin = weights[0], wmax = weights[0];
  for (double w : weights) {
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
  }
  std::vector<double> norm(weights.size(), 1.0);
  if (wmax > wmin)
    for (size_t i = 0; i < weights.size(); ++i)
      norm[i] = 0.1 + 0.9 * (weights[i] - wmin) / (wmax - wmin);

  std::map<std::string, double> points;
  for (size_t li = 0; li < lists.size(); ++li) {
    const auto& entries = lists[li].entries;
    double L = static_cast<double>(entries.size());
    for (size_t i = 0; i < entries.size(); ++i)
      points[entries[i].docid] += norm[li] * (L - static_cast<double>(i));
  }

  std::vector<std::pair<std::string, double>> ranked(points.begin(), points.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > static_cast<size_t>(k)) ranked.resize(k);

  ResultList out;
  out.qid = lists[0].qid;
  out.provenance = Provenance::rerank;
  out.entries.reserve(ranked.size());
  for (auto& [docid, score] : ranked) out.entries.push_back({docid, score});
  return out;
}

PqrOutcome pqr_retrieve(const Index& index, const std::string& qid, const Query& q0,
                        const CandidateScorer& scorer, const SearchParams& sp,
                        const RetrievalParams& rp, bool keep_features) {
  PqrOutcome out;
  RetrievalParams pool_rp = rp;
  pool_rp.k = rp.pool_size;
  out.pool = retrieve(index, q0, pool_rp);
  out.pool.qid = qid;
  if (out.pool.empty()) {
    out.merged.qid = qid;
    return out;
  }

  DocLmCache cache(index);
  VisitObserver observer;
  if (keep_features)
    observer = [&](const VisitedNode& v) {
      out.visited_features.push_back(v.fv);
      out.visited_queries.push_back(v.query);
    };
  SearchOutcome search =
      query_search(index, q0, out.pool, scorer, sp, rp, nullptr, observer, &cache);
  out.trace = std::move(search.trace);
  out.top = std::move(search.top);

  if (out.top.empty()) {
    // No reformulation was reachable; fall back to the q0 ranking.
    out.merged = out.pool;
    if (out.merged.entries.size() > static_cast<size_t>(rp.k)) out.merged.entries.resize(rp.k);
    return out;
  }

  std::vector<ResultList> lists;
  std::vector<double> weights;
  lists.reserve(out.top.size());
  for (const auto& [q, predicted] : out.top) {
    lists.push_back(rerank(index, q, out.pool, rp));
    weights.push_back(predicted);
  }
  out.merged = borda_merge(lists, weights, rp.k);
  out.merged.qid = qid;
  return out;
}

}  // namespace pqr
