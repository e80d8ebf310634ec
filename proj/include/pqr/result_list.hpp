#pragma once

#include <string>
#include <vector>

namespace pqr {

enum class Provenance { full_retrieval, rerank };

struct ResultEntry {
  std::string docid;
  double score = 0;
};

/// Ranked retrieval output: scores non-increasing, docids unique, score ties
/// broken by ascending docid.
struct ResultList {
  std::string qid;
  Provenance provenance = Provenance::full_retrieval;
  std::vector<ResultEntry> entries;

  bool empty() const { return entries.empty(); }
  size_t size() const { return entries.size(); }
};

}  // namespace pqr
