#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pqr/corpus.hpp"

namespace pqr {

using TermId = int32_t;
using DocIdx = int32_t;

/// Sparse probability distribution over terms, sorted by TermId.
/// Present entries are strictly positive and sum to 1 (within 1e-9).
struct LanguageModel {
  std::vector<std::pair<TermId, double>> probs;

  double prob(TermId t) const;
  double sum() const;
};

struct IndexMeta {
  std::string stemmer = "porter-fixpoint";
  uint64_t stopword_hash = 0;
  int64_t build_unix_time = 0;
};

/// Immutable in-memory inverted index plus a forward index (per-document term
/// vectors) used for document language models and pool re-ranking.
class Index {
 public:
  struct TermInfo {
    std::string text;
    int32_t df = 0;
    int64_t cf = 0;
    std::vector<std::pair<DocIdx, int32_t>> postings;  // sorted by doc
  };
  struct DocInfo {
    std::string docid;
    int32_t length = 0;                                // token count
    std::vector<std::pair<TermId, int32_t>> terms;     // sorted by term
  };

  static Index build(std::span<const Document> docs, IndexMeta meta);

  int32_t n_docs() const { return static_cast<int32_t>(docs_.size()); }
  int64_t total_terms() const { return total_terms_; }
  size_t vocab_size() const { return terms_.size(); }
  const IndexMeta& meta() const { return meta_; }

  std::optional<TermId> term_id(const std::string& term) const;
  const TermInfo& term(TermId t) const { return terms_[t]; }
  std::optional<DocIdx> doc_idx(const std::string& docid) const;
  const DocInfo& doc(DocIdx d) const { return docs_[d]; }
  const std::string& docid(DocIdx d) const { return docs_[d].docid; }

  int32_t tf(TermId t, DocIdx d) const;

  const LanguageModel& collection_lm() const { return collection_lm_; }
  LanguageModel doc_lm(DocIdx d) const;
  LanguageModel doc_lm(const std::string& docid) const;

  /// ln(N/df) for in-vocabulary terms; ln(2N) for out-of-vocabulary terms so
  /// downstream features stay finite.
  double idf(const std::string& term) const;
  double idf(TermId t) const;

  void save(const std::string& path) const;
  static Index load(const std::string& path);

  void dump_stats_csv(const std::string& path) const;

 private:
  std::vector<DocInfo> docs_;
  std::vector<TermInfo> terms_;  // sorted by term text; TermId = position
  std::unordered_map<std::string, TermId> term_ids_;
  std::unordered_map<std::string, DocIdx> doc_ids_;
  int64_t total_terms_ = 0;
  IndexMeta meta_;
  LanguageModel collection_lm_;

  void build_lookups();
};

}  // namespace pqr
