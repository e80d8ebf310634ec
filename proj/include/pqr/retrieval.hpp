#pragma once

#include <memory>
#include <unordered_map>

#include "pqr/index.hpp"
#include "pqr/query.hpp"
#include "pqr/result_list.hpp"

namespace pqr {

struct RetrievalParams {
  double mu = 1000;     // Dirichlet smoothing mass
  int k = 1000;         // result depth
  int pool_size = 1000; // re-ranking pool depth

  void validate() const;
};

/// Memoizes document language models; shared across the feature computations
/// of one retrieval session, where the candidate result lists keep drawing
/// from the same pool of documents.
class DocLmCache {
 public:
  explicit DocLmCache(const Index& index) : index_(index) {}
  const LanguageModel& get(DocIdx d);

 private:
  const Index& index_;
  std::unordered_map<DocIdx, LanguageModel> cache_;
};

/// Dirichlet-smoothed query log likelihood of a document. Query terms with
/// zero collection frequency are skipped.
double score_ql(const Index& index, const Query& query, const std::string& docid, double mu);

/// Top-k documents containing at least one query term, by score_ql descending
/// with ties broken by ascending docid.
ResultList retrieve(const Index& index, const Query& query, const RetrievalParams& params);

/// Reorders the pool's documents by score_ql under `query`. Documents sharing
/// no term with the query are appended in their original pool order, with
/// strictly decreasing placeholder scores below the scored block.
ResultList rerank(const Index& index, const Query& query, const ResultList& pool,
                  const RetrievalParams& params);

/// Relevance model over the top fb_docs entries: document language models
/// mixed with weights proportional to exp(score - max score).
LanguageModel relevance_model(const Index& index, const ResultList& results, int fb_docs,
                              DocLmCache* cache = nullptr);

/// RM3: interpolates the original query's term distribution with the
/// truncated, renormalized relevance model and rescores the retrieval pool.
/// The weighted form stays internal; callers only see the final ranking.
ResultList rm3_retrieve(const Index& index, const Query& query, const RetrievalParams& params,
                        int fb_docs, int fb_terms, double lambda);

}  // namespace pqr
