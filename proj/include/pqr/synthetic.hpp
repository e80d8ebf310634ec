#pragma once

#include <cstdint>
#include <vector>

#include "pqr/corpus.hpp"

namespace pqr {

struct SyntheticData {
  std::vector<Document> docs;
  std::vector<Topic> topics;
  QrelSet qrels;
};

/// Deterministic desk-scale test collection. Each topic owns a disjoint set
/// of topical terms: three "common" terms that appear in the topic title, in
/// relevant documents, and (strongly) in a handful of distractor documents,
/// plus five "exclusive" terms that occur only in relevant documents. The
/// rest of every document is drawn from a power-law background model, with a
/// small leak of common terms into ordinary background documents. Distractors
/// outrank relevant documents on the title query, so there is headroom for a
/// reformulation that discovers the exclusive terms.
///
/// Requires n_docs >= 10 * n_topics and vocab_size >= 20 * n_topics.
SyntheticData generate_synthetic(int n_docs, int n_topics, int vocab_size, uint64_t seed);

}  // namespace pqr
