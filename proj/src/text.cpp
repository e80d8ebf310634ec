#include "pqr/text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pqr/errors.hpp"
#include "pqr/porter.hpp"
#include "pqr/util.hpp"

namespace pqr {

namespace {

Stopwords parse_stopword_stream(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::string w(t);
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    words.push_back(std::move(w));
  }
  return Stopwords::from_words(std::move(words));
}

bool all_alpha(const std::string& t) {
  return std::all_of(t.begin(), t.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool all_digit(const std::string& t) {
  return std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool keep_token(const std::string& t, const Stopwords& sw) {
  return t.size() > 1 && !all_digit(t) && !sw.contains(t);
}

}  // namespace

Stopwords Stopwords::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path);
  return parse_stopword_stream(in);
}

Stopwords Stopwords::from_words(std::vector<std::string> words) {
  Stopwords sw;
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& w : words) {
    h = fnv1a(w, h);
    h = fnv1a("\n", h);
    sw.words_.insert(w);
  }
  sw.content_hash_ = h;
  return sw;
}

const Stopwords& Stopwords::smart() {
  static const Stopwords instance = [] {
    std::istringstream in(detail::smart_stopword_text());
    return parse_stopword_stream(in);
  }();
  return instance;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    char lc = 0;
    if (c >= 'a' && c <= 'z') lc = static_cast<char>(c);
    else if (c >= 'A' && c <= 'Z') lc = static_cast<char>(c - 'A' + 'a');
    else if (c >= '0' && c <= '9') lc = static_cast<char>(c);
    if (lc) {
      cur.push_back(lc);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> normalize(std::string_view text, const Stopwords& stopwords) {
  std::vector<std::string> out;
  for (std::string& tok : tokenize(text)) {
    if (!keep_token(tok, stopwords)) continue;
    if (all_alpha(tok)) tok = porter_stem_fixpoint(std::move(tok));
    // Stems can collapse into noise ("doing" -> "do"); filter again so the
    // output is stable under a second normalize pass.
    if (!keep_token(tok, stopwords)) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace pqr
