#include "pqr/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "pqr/errors.hpp"
#include "pqr/util.hpp"

namespace pqr {

void QrelSet::set(const std::string& qid, const std::string& docid, int grade) {
  if (grade < 0) throw DataError("qrels grade must be >= 0 for " + qid + " " + docid);
  by_qid_[qid][docid] = grade;
}

int QrelSet::grade(const std::string& qid, const std::string& docid) const {
  auto it = by_qid_.find(qid);
  if (it == by_qid_.end()) return 0;
  auto jt = it->second.find(docid);
  return jt == it->second.end() ? 0 : jt->second;
}

const std::map<std::string, int>* QrelSet::topic(const std::string& qid) const {
  auto it = by_qid_.find(qid);
  return it == by_qid_.end() ? nullptr : &it->second;
}

CorpusFormat corpus_format_from_name(const std::string& name) {
  if (name == "trectext") return CorpusFormat::trectext;
  if (name == "jsonl") return CorpusFormat::jsonl;
  throw UsageError("unknown corpus format: " + name + " (expected trectext or jsonl)");
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void corpus_error(const std::string& path, size_t offset, const std::string& docid,
                               const std::string& what) {
  std::string msg = path + ": byte " + std::to_string(offset);
  if (!docid.empty()) msg += " (docid " + docid + ")";
  msg += ": " + what;
  throw DataError(msg);
}

std::vector<Document> parse_jsonl(const std::string& path, const Stopwords& stopwords) {
  std::string content = read_file(path);
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  size_t pos = 0;
  while (pos < content.size()) {
    size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::string_view line = trim(std::string_view(content).substr(pos, eol - pos));
    size_t offset = pos;
    pos = eol + 1;
    if (line.empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded()) corpus_error(path, offset, "", "invalid JSON record");
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string())
      corpus_error(path, offset, "", "record missing string field \"id\"");
    std::string docid = obj["id"].get<std::string>();
    if (docid.empty()) corpus_error(path, offset, "", "empty docid");
    if (!obj.contains("text") || !obj["text"].is_string())
      corpus_error(path, offset, docid, "record missing string field \"text\"");
    if (!seen.insert(docid).second) corpus_error(path, offset, docid, "duplicate docid");
    Document d;
    d.docid = std::move(docid);
    d.text = obj["text"].get<std::string>();
    d.terms = normalize(d.text, stopwords);
    docs.push_back(std::move(d));
  }
  return docs;
}

// Extracts the text between <tag> and </tag> starting at `from`; returns
// npos-pair when the tag is absent.
std::pair<size_t, size_t> tag_span(const std::string& s, const std::string& tag, size_t from,
                                   size_t until) {
  std::string open = "<" + tag + ">";
  std::string close = "</" + tag + ">";
  size_t a = s.find(open, from);
  if (a == std::string::npos || a >= until) return {std::string::npos, std::string::npos};
  a += open.size();
  size_t b = s.find(close, a);
  if (b == std::string::npos || b > until) return {std::string::npos, std::string::npos};
  return {a, b};
}

std::vector<Document> parse_trectext(const std::string& path, const Stopwords& stopwords) {
  std::string content = read_file(path);
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  size_t pos = 0;
  while (true) {
    size_t start = content.find("<DOC>", pos);
    if (start == std::string::npos) break;
    size_t end = content.find("</DOC>", start);
    if (end == std::string::npos) corpus_error(path, start, "", "unterminated <DOC> block");
    auto [id_a, id_b] = tag_span(content, "DOCNO", start, end);
    if (id_a == std::string::npos) corpus_error(path, start, "", "<DOC> block without <DOCNO>");
    std::string docid(trim(std::string_view(content).substr(id_a, id_b - id_a)));
    if (docid.empty()) corpus_error(path, start, "", "empty <DOCNO>");
    if (!seen.insert(docid).second) corpus_error(path, start, docid, "duplicate docid");

    std::string text;
    size_t cursor = start;
    bool any_text = false;
    while (true) {
      auto [t_a, t_b] = tag_span(content, "TEXT", cursor, end);
      if (t_a == std::string::npos) break;
      if (any_text) text += '\n';
      text.append(content, t_a, t_b - t_a);
      any_text = true;
      cursor = t_b;
    }
    if (!any_text) corpus_error(path, start, docid, "<DOC> block without <TEXT>");

    Document d;
    d.docid = std::move(docid);
    d.text = std::move(text);
    d.terms = normalize(d.text, stopwords);
    docs.push_back(std::move(d));
    pos = end + 6;
  }
  return docs;
}

}  // namespace

std::vector<Document> parse_corpus(const std::string& path, CorpusFormat format,
                                   const Stopwords& stopwords) {
  switch (format) {
    case CorpusFormat::jsonl:
      return parse_jsonl(path, stopwords);
    case CorpusFormat::trectext:
      return parse_trectext(path, stopwords);
  }
  throw UsageError("unhandled corpus format");
}

std::vector<Topic> parse_topics(const std::string& path, const Stopwords& stopwords) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open topics file: " + path);
  std::vector<Topic> topics;
  std::unordered_set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected qid<TAB>title");
    Topic t;
    t.qid = std::string(trim(std::string_view(line).substr(0, tab)));
    t.raw_title = std::string(trim(std::string_view(line).substr(tab + 1)));
    if (t.qid.empty())
      throw DataError(path + ":" + std::to_string(lineno) + ": empty qid");
    if (!seen.insert(t.qid).second)
      throw DataError(path + ":" + std::to_string(lineno) + ": duplicate qid " + t.qid);
    t.title_terms = normalize(t.raw_title, stopwords);
    if (t.title_terms.empty())
      throw DataError(path + ":" + std::to_string(lineno) + ": topic " + t.qid +
                      " has no usable title terms after normalization");
    topics.push_back(std::move(t));
  }
  return topics;
}

QrelSet parse_qrels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open qrels file: " + path);
  QrelSet qrels;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_ws(line);
    int64_t grade = 0;
    if (fields.size() != 4 || !parse_i64(fields[3], grade) || grade < 0)
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected \"qid 0 docid grade\" with grade >= 0");
    qrels.set(std::string(fields[0]), std::string(fields[2]), static_cast<int>(grade));
  }
  return qrels;
}

void write_topics(const std::vector<Topic>& topics, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write topics file: " + path);
  for (const Topic& t : topics) out << t.qid << '\t' << t.raw_title << '\n';
}

void write_qrels(const QrelSet& qrels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write qrels file: " + path);
  for (const auto& [qid, docs] : qrels.all())
    for (const auto& [docid, grade] : docs) out << qid << " 0 " << docid << ' ' << grade << '\n';
}

void write_corpus_jsonl(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const Document& d : docs) {
    nlohmann::json obj;
    obj["id"] = d.docid;
    obj["text"] = d.text;
    out << obj.dump() << '\n';
  }
}

void write_corpus_trectext(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const Document& d : docs) {
    out << "<DOC>\n<DOCNO>" << d.docid << "</DOCNO>\n<TEXT>\n" << d.text << "\n</TEXT>\n</DOC>\n";
  }
}

}  // namespace pqr
