#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pqr {

/// Stopword list plus a content fingerprint so an index can detect that it
/// was built with a different list than the one used at query time.
class Stopwords {
 public:
  Stopwords() = default;

  static Stopwords from_file(const std::string& path);
  static Stopwords from_words(std::vector<std::string> words);

  /// The bundled SMART list.
  static const Stopwords& smart();

  bool contains(const std::string& token) const { return words_.count(token) > 0; }
  size_t size() const { return words_.size(); }
  uint64_t content_hash() const { return content_hash_; }

 private:
  std::unordered_set<std::string> words_;
  uint64_t content_hash_ = 0;
};

/// Lowercases and splits on any non-alphanumeric byte.
std::vector<std::string> tokenize(std::string_view text);

/// Full token pipeline: tokenize, drop noise tokens (length 1, pure digits,
/// stopwords), stem alphabetic tokens to a fixed point, re-apply the noise
/// filter to the stems. Idempotent at the token level.
std::vector<std::string> normalize(std::string_view text, const Stopwords& stopwords);

namespace detail {
const char* smart_stopword_text();  // one word per line, canonical order
}

}  // namespace pqr
