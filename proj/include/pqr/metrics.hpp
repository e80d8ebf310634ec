#pragma once

#include <span>
#include <string>
#include <vector>

#include "pqr/corpus.hpp"
#include "pqr/index.hpp"
#include "pqr/result_list.hpp"

namespace pqr {

struct MetricSpec {
  enum class Kind { ndcg_cut, ndcg, map };
  Kind kind = Kind::ndcg_cut;
  int depth = 30;  // used by ndcg_cut

  std::string name() const;
  static MetricSpec from_name(const std::string& name);
};

/// NDCG with linear gain grade/log2(rank+1), cut at k. Ideal ranking is the
/// judged docs sorted by grade; topics without relevant docs score 0.
double ndcg_at_k(const ResultList& results, const QrelSet& qrels, int k);

/// NDCG over the whole list (no cutoff).
double ndcg_full(const ResultList& results, const QrelSet& qrels);

/// Binary-relevance average precision over the full list, with the count of
/// relevant docs in the qrels as the denominator.
double average_precision(const ResultList& results, const QrelSet& qrels);

double eval_metric(const MetricSpec& spec, const ResultList& results, const QrelSet& qrels);

/// Position-sensitive rank correlation, computed over the intersection of the
/// two docid lists (each re-ranked by its own order) and symmetrized by
/// averaging both directions. Returns 0 when the intersection has fewer than
/// two items.
double tau_ap(std::span<const std::string> list_a, std::span<const std::string> list_b);

/// Sum over common support of sqrt(p*q); 1 for identical distributions,
/// 0 for disjoint supports.
double bhattacharyya(const LanguageModel& a, const LanguageModel& b);

/// Jaccard overlap of the two top-k docid sets.
double jaccard_top_k(const ResultList& a, const ResultList& b, int k);

std::vector<std::string> docids_of(const ResultList& r);

}  // namespace pqr
