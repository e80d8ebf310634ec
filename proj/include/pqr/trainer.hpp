#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pqr/corpus.hpp"
#include "pqr/index.hpp"
#include "pqr/ranker.hpp"
#include "pqr/search.hpp"

namespace pqr {

struct PartitionPlan {
  std::vector<std::vector<std::string>> train;  // six near-equal subsets t0..t5
  std::vector<std::string> v0, v1;              // validation halves
  std::vector<std::string> test;
  uint64_t seed = 0;
};

/// Deterministic 60/20/20 split; the training share is divided into six
/// near-equal subsets and the validation share into two halves.
PartitionPlan partition_topics(const std::vector<Topic>& topics, uint64_t seed);

using Logger = std::function<void(const std::string&)>;

struct CollectSession {
  std::string qid;
  Query query;           // q0 for this session (possibly perturbed)
  std::string session_id;
};

/// Runs the reformulation search for each session and records one training
/// instance per query visited. Topics without judgments are skipped with a
/// warning. Deterministic; sessions may be processed in parallel.
std::vector<TrainingInstance> collect_instances(const Index& index,
                                                const std::vector<CollectSession>& sessions,
                                                const CandidateScorer& scorer,
                                                const SearchParams& sp, const RetrievalParams& rp,
                                                const QrelSet& qrels, int threads = 1,
                                                const Logger& log = {});

/// Oracle scorer for data gathering: true NDCG@30 of the candidate rerank.
class OracleScorer : public CandidateScorer {
 public:
  OracleScorer(const QrelSet& qrels, std::string qid, int k = 30)
      : qrels_(&qrels), qid_(std::move(qid)), k_(k) {}
  double score(const Query&, const ResultList& results, const FeatureVector&) const override;

 private:
  const QrelSet* qrels_;
  std::string qid_;
  int k_;
};

/// Randomly deforms a query (add a true-relevance-model term or drop a term,
/// each with probability 1/2) until its top-10 results drift far enough
/// (Jaccard < 0.5) while keeping at least 75% of the original NDCG@30.
/// Gives up after 50 mutations and returns the original query.
Query perturb_query(const Index& index, const Topic& topic, const QrelSet& qrels,
                    const ResultList& pool, const RetrievalParams& rp, uint64_t seed,
                    const Logger& log = {});

struct DaggerConfig {
  int passes = 3;
  std::vector<double> C_grid = {0.1, 1.0, 10.0};
  std::vector<int> m_grid = {5, 10, 15, 20};
  double pair_delta = 0.01;
  SearchParams search;
  RetrievalParams retrieval;
  int threads = 1;
  std::string checkpoint_dir;  // optional; one model file per (pass, subset)
};

struct TrainLogRow {
  int pass = 0;
  int subset = 0;
  int64_t n_instances = 0;
  double best_C = 0;
  int m = 0;
  double v0_ndcg30 = 0;
  double v1_ndcg30 = 0;
};

struct DaggerResult {
  LinearRankModel model;                 // best v1 checkpoint over the whole run
  std::vector<TrainLogRow> log;          // one row per (pass, subset)
  std::vector<std::string> train_qids;   // audit: sessions that produced instances
  std::vector<std::string> v0_qids;      // audit: topics used for C/m selection
};

/// The multi-pass data-gathering loop: instances accumulate across subsets
/// and passes, the scorer is the oracle only for the very first subset, C and
/// m are tuned on v0 after every subset, and the checkpoint with the best v1
/// score is returned. Later passes search from perturbed queries.
DaggerResult dagger_loop(const Index& index, const std::vector<Topic>& topics,
                         const PartitionPlan& plan, const DaggerConfig& cfg, const QrelSet& qrels,
                         uint64_t seed, const Logger& log = {});

void write_train_log(const std::vector<TrainLogRow>& rows, const std::string& path,
                     const std::vector<std::string>& header_comments = {});

}  // namespace pqr
