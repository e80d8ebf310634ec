#pragma once

#include <string>

namespace pqr {

/// One pass of the classic Porter stemming algorithm. Expects a lowercase
/// ASCII word; words of length <= 2 are returned unchanged.
std::string porter_stem(std::string word);

/// porter_stem iterated to a fixed point. A single pass is not idempotent
/// (e.g. "universities" -> "univers" -> "univer"); the token pipeline needs
/// stems that are stable under re-stemming, so it uses this form.
std::string porter_stem_fixpoint(std::string word);

}  // namespace pqr
