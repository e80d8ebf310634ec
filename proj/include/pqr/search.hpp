#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "pqr/features.hpp"
#include "pqr/index.hpp"
#include "pqr/query.hpp"
#include "pqr/ranker.hpp"
#include "pqr/result_list.hpp"
#include "pqr/retrieval.hpp"

namespace pqr {

/// Feedback depth for the relevance models used by candidate generation and
/// the feature language models.
constexpr int kFeedbackLmDepth = 10;

struct SearchParams {
  int n = 10;  // term-addition candidates per node
  int b = 3;   // branch width
  int d = 4;   // maximum depth
  int m = 10;  // reformulations merged at the end

  void validate() const;
};

/// Scores a candidate query during the search. Implementations must be pure
/// functions of their inputs so searches stay deterministic.
class CandidateScorer {
 public:
  virtual ~CandidateScorer() = default;
  virtual double score(const Query& q, const ResultList& results,
                       const FeatureVector& fv) const = 0;
};

class ModelScorer : public CandidateScorer {
 public:
  explicit ModelScorer(const LinearRankModel& model) : model_(&model) {}
  double score(const Query&, const ResultList&, const FeatureVector& fv) const override {
    return model_->predict(fv);
  }

 private:
  const LinearRankModel* model_;
};

/// Uniform [0,1) score derived by hashing the candidate, so the value does
/// not depend on visiting order.
class RandomScorer : public CandidateScorer {
 public:
  explicit RandomScorer(uint64_t seed) : seed_(seed) {}
  double score(const Query& q, const ResultList&, const FeatureVector&) const override;

 private:
  uint64_t seed_;
};

/// Produces the reformulation candidates of a node. The default source emits
/// every single-term deletion plus additions of the strongest relevance-model
/// terms; tests may substitute an instrumented source.
class CandidateSource {
 public:
  virtual ~CandidateSource() = default;
  virtual std::vector<Query> candidates(const Query& q, const ResultList& results) const = 0;
};

class RmCandidateSource : public CandidateSource {
 public:
  RmCandidateSource(const Index& index, int n, DocLmCache* cache = nullptr)
      : index_(&index), n_(n), cache_(cache) {}
  std::vector<Query> candidates(const Query& q, const ResultList& results) const override;

 private:
  const Index* index_;
  int n_;
  DocLmCache* cache_;
};

/// All single-term deletions (when |q| > 1) plus additions of the top-n
/// relevance-model terms not already in q. The unmodified query is never a
/// candidate. Empty results yield deletions only.
std::vector<Query> generate_candidates(const Index& index, const Query& q,
                                       const ResultList& results, int n,
                                       DocLmCache* cache = nullptr);

struct TraceEvent {
  int depth = 0;  // depth of the candidate (parent depth + 1)
  Query parent;
  Query candidate;
  double predicted = 0;
  bool expanded = false;
  bool cache_hit = false;
};

struct SearchTrace {
  std::vector<TraceEvent> events;
  int64_t expansions = 0;
  int64_t generated = 0;           // candidate evaluations, cache hits included
  int64_t unique_evaluations = 0;  // distinct queries scored
  std::map<int, int64_t> generated_per_level;

  void dump(std::ostream& out) const;
  void dump_file(const std::string& path) const;
};

struct VisitedNode {
  const Query& query;
  int depth;
  const Query& parent;
  const FeatureVector& fv;
  const ResultList& results;
  double predicted;
};

using VisitObserver = std::function<void(const VisitedNode&)>;

struct SearchOutcome {
  std::vector<std::pair<Query, double>> top;  // best-predicted visited queries
  SearchTrace trace;
};

/// Recursive reformulation search: at each node generate candidates, score
/// them, recurse on the b best, and return the m best-predicted queries
/// visited anywhere. Prediction ties break by canonical query order, so the
/// search is fully deterministic. `pool` must be the q0 retrieval the session
/// reranks against.
SearchOutcome query_search(const Index& index, const Query& q0, const ResultList& pool,
                           const CandidateScorer& scorer, const SearchParams& sp,
                           const RetrievalParams& rp, const CandidateSource* source = nullptr,
                           const VisitObserver& on_visit = {}, DocLmCache* cache = nullptr);

/// Weighted Borda fusion: weights are min-max normalized into [0.1, 1.0]
/// (all-equal weights become 1.0), a list of length L awards L-i+1 points at
/// rank i, and documents are ordered by total points then docid.
ResultList borda_merge(const std::vector<ResultList>& lists, const std::vector<double>& weights,
                       int k);

struct PqrOutcome {
  ResultList merged;
  ResultList pool;  // the q0 retrieval the session reranked against
  std::vector<std::pair<Query, double>> top;
  SearchTrace trace;
  std::vector<FeatureVector> visited_features;  // aligned with trace visit order
  std::vector<Query> visited_queries;
};

/// Full pipeline for one topic: retrieve the q0 pool, search, rerank the top
/// m reformulations over the pool and Borda-merge them with predicted scores
/// as weights. An empty q0 retrieval yields an empty list.
PqrOutcome pqr_retrieve(const Index& index, const std::string& qid, const Query& q0,
                        const CandidateScorer& scorer, const SearchParams& sp,
                        const RetrievalParams& rp, bool keep_features = false);

}  // namespace pqr
