#include "pqr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "pqr/errors.hpp"

namespace pqr {

std::string MetricSpec::name() const {
  switch (kind) {
    case Kind::ndcg_cut:
      return "ndcg_cut_" + std::to_string(depth);
    case Kind::ndcg:
      return "ndcg";
    case Kind::map:
      return "map";
  }
  return "?";
}

MetricSpec MetricSpec::from_name(const std::string& name) {
  if (name == "ndcg") return {Kind::ndcg, 0};
  if (name == "map") return {Kind::map, 0};
  constexpr const char* prefix = "ndcg_cut_";
  if (name.rfind(prefix, 0) == 0) {
    int depth = 0;
    try {
      depth = std::stoi(name.substr(9));
    } catch (...) {
      throw UsageError("bad metric name: " + name);
    }
    if (depth < 1) throw UsageError("metric depth must be >= 1: " + name);
    return {Kind::ndcg_cut, depth};
  }
  throw UsageError("unknown metric: " + name + " (expected ndcg_cut_K, ndcg or map)");
}

namespace {

double dcg(std::span<const int> grades) {
  double s = 0;
  for (size_t i = 0; i < grades.size(); ++i)
    s += static_cast<double>(grades[i]) / std::log2(static_cast<double>(i) + 2.0);
  return s;
}

}  // namespace

double ndcg_at_k(const ResultList& results, const QrelSet& qrels, int k) {
  const auto* judged = qrels.topic(results.qid);
  std::vector<int> ideal;
  if (judged) {
    for (const auto& [docid, grade] : *judged)
      if (grade > 0) ideal.push_back(grade);
  }
  if (ideal.empty()) return 0.0;
  std::sort(ideal.begin(), ideal.end(), std::greater<int>());
  if (static_cast<int>(ideal.size()) > k) ideal.resize(k);

  std::vector<int> gains;
  size_t depth = std::min<size_t>(results.entries.size(), static_cast<size_t>(k));
  gains.reserve(depth);
  for (size_t i = 0; i < depth; ++i)
    gains.push_back(qrels.grade(results.qid, results.entries[i].docid));

  double ideal_dcg = dcg(ideal);
  return ideal_dcg > 0 ? dcg(gains) / ideal_dcg : 0.0;
}

double ndcg_full(const ResultList& results, const QrelSet& qrels) {
  const auto* judged = qrels.topic(results.qid);
  size_t n_relevant = 0;
  if (judged)
    for (const auto& [docid, grade] : *judged)
      if (grade > 0) ++n_relevant;
  int k = static_cast<int>(std::max(results.entries.size(), n_relevant));
  if (k == 0) return 0.0;
  return ndcg_at_k(results, qrels, k);
}

double average_precision(const ResultList& results, const QrelSet& qrels) {
  const auto* judged = qrels.topic(results.qid);
  size_t n_relevant = 0;
  if (judged)
    for (const auto& [docid, grade] : *judged)
      if (grade > 0) ++n_relevant;
  if (n_relevant == 0) return 0.0;

  double sum = 0;
  size_t hits = 0;
  for (size_t i = 0; i < results.entries.size(); ++i) {
    if (qrels.grade(results.qid, results.entries[i].docid) > 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(n_relevant);
}

double eval_metric(const MetricSpec& spec, const ResultList& results, const QrelSet& qrels) {
  switch (spec.kind) {
    case MetricSpec::Kind::ndcg_cut:
      return ndcg_at_k(results, qrels, spec.depth);
    case MetricSpec::Kind::ndcg:
      return ndcg_full(results, qrels);
    case MetricSpec::Kind::map:
      return average_precision(results, qrels);
  }
  return 0;
}

namespace {

// Fenwick tree over reference ranks; supports prefix counts in O(log n).
class BitCounter {
 public:
  explicit BitCounter(size_t n) : tree_(n + 1, 0) {}
  void add(size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  int count_below(size_t i) const {  // # of added values < i
    int s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<int> tree_;
};

// One direction of tau-AP: `eval_ranks` holds, for each item of the evaluated
// ranking in order, its rank in the reference ranking.
double tau_ap_directed(const std::vector<int>& eval_ranks) {
  size_t n = eval_ranks.size();
  BitCounter seen(n);
  seen.add(static_cast<size_t>(eval_ranks[0]));
  double sum = 0;
  for (size_t i = 1; i < n; ++i) {
    int concordant = seen.count_below(static_cast<size_t>(eval_ranks[i]));
    sum += static_cast<double>(concordant) / static_cast<double>(i);
    seen.add(static_cast<size_t>(eval_ranks[i]));
  }
  return 2.0 / static_cast<double>(n - 1) * sum - 1.0;
}

}  // namespace

double tau_ap(std::span<const std::string> list_a, std::span<const std::string> list_b) {
  std::unordered_map<std::string, int> pos_b;
  pos_b.reserve(list_b.size());
  for (size_t i = 0; i < list_b.size(); ++i) pos_b.emplace(list_b[i], static_cast<int>(i));

  // Restrict both lists to the common docids, each keeping its own order.
  std::vector<int> a_common_bpos;  // for items of A (in A order): position in B
  a_common_bpos.reserve(std::min(list_a.size(), list_b.size()));
  for (const auto& d : list_a) {
    auto it = pos_b.find(d);
    if (it == pos_b.end()) continue;
    a_common_bpos.push_back(it->second);
  }
  size_t n = a_common_bpos.size();
  if (n < 2) return 0.0;

  // Compress both orders to ranks within the intersection.
  std::vector<int> sorted_bpos = a_common_bpos;
  std::sort(sorted_bpos.begin(), sorted_bpos.end());
  std::vector<int> a_ranks(n);  // A order -> rank in restricted B
  for (size_t i = 0; i < n; ++i) {
    auto it = std::lower_bound(sorted_bpos.begin(), sorted_bpos.end(), a_common_bpos[i]);
    a_ranks[i] = static_cast<int>(it - sorted_bpos.begin());
  }
  // B order -> rank in restricted A is the inverse permutation.
  std::vector<int> b_ranks(n);
  for (size_t i = 0; i < n; ++i) b_ranks[static_cast<size_t>(a_ranks[i])] = static_cast<int>(i);

  return 0.5 * (tau_ap_directed(a_ranks) + tau_ap_directed(b_ranks));
}

double bhattacharyya(const LanguageModel& a, const LanguageModel& b) {
  double s = 0;
  auto ia = a.probs.begin();
  auto ib = b.probs.begin();
  while (ia != a.probs.end() && ib != b.probs.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      s += std::sqrt(ia->second * ib->second);
      ++ia;
      ++ib;
    }
  }
  return std::clamp(s, 0.0, 1.0);
}

double jaccard_top_k(const ResultList& a, const ResultList& b, int k) {
  std::unordered_set<std::string> sa, sb;
  for (size_t i = 0; i < a.entries.size() && i < static_cast<size_t>(k); ++i)
    sa.insert(a.entries[i].docid);
  for (size_t i = 0; i < b.entries.size() && i < static_cast<size_t>(k); ++i)
    sb.insert(b.entries[i].docid);
  if (sa.empty() && sb.empty()) return 1.0;
  size_t inter = 0;
  for (const auto& d : sa) inter += sb.count(d);
  size_t uni = sa.size() + sb.size() - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::string> docids_of(const ResultList& r) {
  std::vector<std::string> out;
  out.reserve(r.entries.size());
  for (const auto& e : r.entries) out.push_back(e.docid);
  return out;
}

}  // namespace pqr
