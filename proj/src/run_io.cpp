#include "pqr/run_io.hpp"

#include <fstream>

#include "pqr/errors.hpp"
#include "pqr/util.hpp"

namespace pqr {

void write_run(const RunFile& run, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write run file: " + path);
  for (const ResultList& topic : run.topics) {
    for (size_t i = 0; i < topic.entries.size(); ++i) {
      const auto& e = topic.entries[i];
      out << topic.qid << " Q0 " << e.docid << ' ' << (i + 1) << ' ' << fmt_fixed6(e.score) << ' '
          << run.tag << '\n';
    }
  }
  if (!out) throw DataError("short write on run file: " + path);
}

RunFile read_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open run file: " + path);
  RunFile run;
  ResultList* cur = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_ws(line);
    double score = 0;
    int64_t rank = 0;
    if (f.size() != 6 || !parse_i64(f[3], rank) || !parse_double(f[4], score))
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected \"qid Q0 docid rank score tag\"");
    std::string qid(f[0]);
    if (run.tag.empty()) run.tag = std::string(f[5]);
    if (!cur || cur->qid != qid) {
      for (const ResultList& t : run.topics)
        if (t.qid == qid)
          throw DataError(path + ":" + std::to_string(lineno) + ": topic " + qid +
                          " appears in non-contiguous blocks");
      run.topics.emplace_back();
      cur = &run.topics.back();
      cur->qid = qid;
    }
    cur->entries.push_back({std::string(f[2]), score});
  }
  return run;
}

}  // namespace pqr
