#pragma once

#include <string>
#include <vector>

namespace pqr {

/// An unweighted keyword query: a canonically sorted set of distinct terms.
/// Always non-empty.
class Query {
 public:
  explicit Query(std::vector<std::string> terms);

  const std::vector<std::string>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool contains(const std::string& term) const;

  /// Query with `term` removed; the query must keep at least one term.
  Query without(const std::string& term) const;
  /// Query with `term` added (no-op if already present).
  Query with(const std::string& term) const;

  std::string joined(char sep = ' ') const;

  bool operator==(const Query& other) const { return terms_ == other.terms_; }
  /// Canonical (lexicographic) order; used for deterministic tie-breaking.
  bool operator<(const Query& other) const { return terms_ < other.terms_; }

 private:
  std::vector<std::string> terms_;
};

}  // namespace pqr
