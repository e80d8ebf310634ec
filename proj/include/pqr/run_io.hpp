#pragma once

#include <string>
#include <vector>

#include "pqr/result_list.hpp"

namespace pqr {

/// One run file = ranked results for many topics in the 6-column format
/// "qid Q0 docid rank score tag".
struct RunFile {
  std::string tag;
  std::vector<ResultList> topics;  // in file order
};

void write_run(const RunFile& run, const std::string& path);
RunFile read_run(const std::string& path);

}  // namespace pqr
