#include "pqr/porter.hpp"

#include <span>
#include <string_view>

namespace pqr {
namespace {

bool is_consonant(const std::string& w, size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      // y is a vowel exactly when it follows a consonant.
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Measure m of w[0, len): the count of vowel->consonant transitions,
// i.e. m in the [C](VC)^m[V] decomposition.
int measure(const std::string& w, size_t len) {
  int m = 0;
  bool prev_vowel = false;
  for (size_t i = 0; i < len; ++i) {
    bool vowel = !is_consonant(w, i);
    if (prev_vowel && !vowel) ++m;
    prev_vowel = vowel;
  }
  return m;
}

bool has_vowel(const std::string& w, size_t len) {
  for (size_t i = 0; i < len; ++i)
    if (!is_consonant(w, i)) return true;
  return false;
}

bool ends_double_consonant(const std::string& w) {
  size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: w[0, len) ends consonant-vowel-consonant and the final consonant is
// not w, x or y.
bool ends_cvc(const std::string& w, size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1)) return false;
  char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view s) {
  return w.size() >= s.size() && w.compare(w.size() - s.size(), s.size(), s) == 0;
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Within a step the longest matching suffix is the only rule considered; if
// its measure condition fails the word passes through unchanged. Tables are
// listed longest suffix first.
void apply_table(std::string& w, std::span<const Rule> rules, int min_measure) {
  for (const Rule& r : rules) {
    if (!ends_with(w, r.suffix)) continue;
    size_t stem_len = w.size() - r.suffix.size();
    if (measure(w, stem_len) > min_measure) {
      w.erase(stem_len);
      w.append(r.replacement);
    }
    return;
  }
}

constexpr Rule kStep2[] = {
    {"ational", "ate"}, {"ization", "ize"}, {"iveness", "ive"}, {"fulness", "ful"},
    {"ousness", "ous"}, {"tional", "tion"}, {"biliti", "ble"},  {"ation", "ate"},
    {"alism", "al"},    {"aliti", "al"},    {"iviti", "ive"},   {"ousli", "ous"},
    {"entli", "ent"},   {"enci", "ence"},   {"anci", "ance"},   {"izer", "ize"},
    {"abli", "able"},   {"alli", "al"},     {"ator", "ate"},    {"eli", "e"},
};

constexpr Rule kStep3[] = {
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ness", ""},  {"ful", ""},
};

constexpr std::string_view kStep4[] = {
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism",
    "ate",   "iti",  "ous",  "ive",  "ize",  "ion",  "al",  "er",  "ic", "ou",
};

}  // namespace

std::string porter_stem(std::string w) {
  if (w.size() <= 2) return w;

  // Step 1a: plural endings.
  if (ends_with(w, "sses")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.erase(w.size() - 2);
  } else if (!ends_with(w, "ss") && ends_with(w, "s")) {
    w.pop_back();
  }

  // Step 1b: -eed / -ed / -ing.
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.pop_back();
  } else {
    bool stripped = false;
    if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
      w.erase(w.size() - 2);
      stripped = true;
    } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
      w.erase(w.size() - 3);
      stripped = true;
    }
    if (stripped) {
      if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w += 'e';
      } else if (ends_double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") &&
                 !ends_with(w, "z")) {
        w.pop_back();
      } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
        w += 'e';
      }
    }
  }

  // Step 1c: terminal y.
  if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w.back() = 'i';

  apply_table(w, kStep2, 0);
  apply_table(w, kStep3, 0);

  // Step 4: drop derivational suffixes when m > 1; -ion additionally
  // requires the stem to end in s or t.
  for (std::string_view s : kStep4) {
    if (!ends_with(w, s)) continue;
    size_t stem_len = w.size() - s.size();
    bool ok = measure(w, stem_len) > 1;
    if (ok && s == "ion") ok = stem_len > 0 && (w[stem_len - 1] == 's' || w[stem_len - 1] == 't');
    if (ok) w.erase(stem_len);
    break;
  }

  // Step 5a: terminal e.
  if (ends_with(w, "e")) {
    int m = measure(w, w.size() - 1);
    if (m > 1 || (m == 1 && !ends_cvc(w, w.size() - 1))) w.pop_back();
  }
  // Step 5b: -ll -> -l when m > 1.
  if (measure(w, w.size()) > 1 && ends_double_consonant(w) && w.back() == 'l') w.pop_back();

  return w;
}

std::string porter_stem_fixpoint(std::string word) {
  // Each pass either shortens the word or maps it to itself, so this loop
  // terminates; the bound is just a guard.
  for (int i = 0; i < 16; ++i) {
    std::string next = porter_stem(word);
    if (next == word) break;
    word = std::move(next);
  }
  return word;
}

}  // namespace pqr
