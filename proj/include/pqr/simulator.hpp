#pragma once

#include <cstdint>
#include <vector>

#include "pqr/corpus.hpp"
#include "pqr/index.hpp"
#include "pqr/query.hpp"
#include "pqr/result_list.hpp"
#include "pqr/retrieval.hpp"
#include "pqr/rng.hpp"

namespace pqr {

struct SimPolicy {
  enum class Kind { oracle, random };
  Kind kind = Kind::oracle;
  uint64_t seed = 0;  // random only

  static SimPolicy from_name(const std::string& name, uint64_t seed);
};

/// Scores candidate queries the way the simulated user would: the oracle
/// policy reranks the pool and reads off true NDCG@k; the random policy draws
/// i.i.d. uniform [0,1) values from `rng`.
std::vector<double> score_queries(const Index& index, const std::vector<Query>& queries,
                                  const std::string& qid, const ResultList& pool,
                                  const SimPolicy& policy, const QrelSet& qrels,
                                  const RetrievalParams& rp, Rng& rng, int k = 30);

struct SimStep {
  Query query;
  double ndcg;  // true NDCG@30 of this query's rerank
};

struct SimResult {
  Query final_query;
  std::vector<SimStep> path;  // starts at q0; length <= maxd + 1
};

/// Greedy depth-limited ascent over single-edit reformulations. Candidates at
/// each step are all single deletions, additions of the ten most frequent
/// terms in the current top-10 results, and the current query itself; the
/// policy's argmax is followed until it stalls or maxd steps are taken.
SimResult qr_sim(const Index& index, const std::string& qid, const Query& q0,
                 const QrelSet& qrels, int maxd, const SimPolicy& policy,
                 const RetrievalParams& rp);

}  // namespace pqr
