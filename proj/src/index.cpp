#include "pqr/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "pqr/errors.hpp"
#include "pqr/util.hpp"

namespace pqr {

double LanguageModel::prob(TermId t) const {
  auto it = std::lower_bound(probs.begin(), probs.end(), t,
                             [](const auto& e, TermId v) { return e.first < v; });
  return (it != probs.end() && it->first == t) ? it->second : 0.0;
}

double LanguageModel::sum() const {
  double s = 0;
  for (const auto& [t, p] : probs) s += p;
  return s;
}

Index Index::build(std::span<const Document> docs, IndexMeta meta) {
  if (docs.empty()) throw DataError("cannot build an index from zero documents");

  Index idx;
  idx.meta_ = std::move(meta);

  // Assign term ids by sorted term text so ids are stable across rebuilds.
  std::map<std::string, std::map<DocIdx, int32_t>> by_term;
  idx.docs_.reserve(docs.size());
  for (const Document& d : docs) {
    if (d.docid.empty()) throw DataError("document with empty docid");
    DocIdx di = static_cast<DocIdx>(idx.docs_.size());
    if (!idx.doc_ids_.emplace(d.docid, di).second)
      throw DataError("duplicate docid: " + d.docid);
    DocInfo info;
    info.docid = d.docid;
    info.length = static_cast<int32_t>(d.terms.size());
    idx.total_terms_ += info.length;
    idx.docs_.push_back(std::move(info));
    for (const std::string& t : d.terms) ++by_term[t][di];
  }

  idx.terms_.reserve(by_term.size());
  for (auto& [text, postings] : by_term) {
    TermInfo info;
    info.text = text;
    info.df = static_cast<int32_t>(postings.size());
    info.postings.reserve(postings.size());
    for (const auto& [di, tf] : postings) {
      info.cf += tf;
      info.postings.emplace_back(di, tf);
    }
    TermId tid = static_cast<TermId>(idx.terms_.size());
    for (const auto& [di, tf] : postings) idx.docs_[di].terms.emplace_back(tid, tf);
    idx.terms_.push_back(std::move(info));
  }
  idx.build_lookups();
  return idx;
}

void Index::build_lookups() {
  term_ids_.clear();
  term_ids_.reserve(terms_.size());
  for (size_t i = 0; i < terms_.size(); ++i)
    term_ids_.emplace(terms_[i].text, static_cast<TermId>(i));
  if (doc_ids_.empty()) {
    for (size_t i = 0; i < docs_.size(); ++i)
      doc_ids_.emplace(docs_[i].docid, static_cast<DocIdx>(i));
  }
  collection_lm_.probs.clear();
  collection_lm_.probs.reserve(terms_.size());
  double total = static_cast<double>(total_terms_);
  for (size_t i = 0; i < terms_.size(); ++i)
    collection_lm_.probs.emplace_back(static_cast<TermId>(i),
                                      static_cast<double>(terms_[i].cf) / total);
}

std::optional<TermId> Index::term_id(const std::string& term) const {
  auto it = term_ids_.find(term);
  if (it == term_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<DocIdx> Index::doc_idx(const std::string& docid) const {
  auto it = doc_ids_.find(docid);
  if (it == doc_ids_.end()) return std::nullopt;
  return it->second;
}

int32_t Index::tf(TermId t, DocIdx d) const {
  const auto& terms = docs_[d].terms;
  auto it = std::lower_bound(terms.begin(), terms.end(), t,
                             [](const auto& e, TermId v) { return e.first < v; });
  return (it != terms.end() && it->first == t) ? it->second : 0;
}

LanguageModel Index::doc_lm(DocIdx d) const {
  const DocInfo& info = docs_[d];
  if (info.length == 0) return {};
  LanguageModel lm;
  lm.probs.reserve(info.terms.size());
  double len = static_cast<double>(info.length);
  for (const auto& [t, tf] : info.terms) lm.probs.emplace_back(t, static_cast<double>(tf) / len);
  return lm;
}

LanguageModel Index::doc_lm(const std::string& docid) const {
  auto d = doc_idx(docid);
  if (!d) throw DataError("unknown docid: " + docid);
  return doc_lm(*d);
}

double Index::idf(TermId t) const {
  return std::log(static_cast<double>(n_docs()) / static_cast<double>(terms_[t].df));
}

double Index::idf(const std::string& term) const {
  auto t = term_id(term);
  if (!t) return std::log(2.0 * static_cast<double>(n_docs()));
  return idf(*t);
}

namespace {

constexpr char kMagic[] = "PQRIDX1";
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, uint64_t v) {
  put_u32(out, static_cast<uint32_t>(v));
  put_u32(out, static_cast<uint32_t>(v >> 32));
}

void put_str(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw DataError("index snapshot truncated");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t get_u64(std::istream& in) {
  uint64_t lo = get_u32(in);
  uint64_t hi = get_u32(in);
  return lo | (hi << 32);
}

std::string get_str(std::istream& in) {
  uint32_t n = get_u32(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw DataError("index snapshot truncated");
  return s;
}

}  // namespace

// Snapshot layout (little-endian):
//   magic "PQRIDX1", u32 version,
//   str stemmer, u64 stopword_hash, u64 build_unix_time,
//   u32 n_docs, u64 total_terms, u32 n_terms,
//   n_docs x (str docid, u32 doc_length),
//   term records in sorted term order:
//     str term, u32 df, u64 cf, df x (u32 doc_index, u32 tf).
void Index::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write index snapshot: " + path);
  out.write(kMagic, sizeof(kMagic) - 1);
  put_u32(out, kVersion);
  put_str(out, meta_.stemmer);
  put_u64(out, meta_.stopword_hash);
  put_u64(out, static_cast<uint64_t>(meta_.build_unix_time));
  put_u32(out, static_cast<uint32_t>(docs_.size()));
  put_u64(out, static_cast<uint64_t>(total_terms_));
  put_u32(out, static_cast<uint32_t>(terms_.size()));
  for (const DocInfo& d : docs_) {
    put_str(out, d.docid);
    put_u32(out, static_cast<uint32_t>(d.length));
  }
  for (const TermInfo& t : terms_) {
    put_str(out, t.text);
    put_u32(out, static_cast<uint32_t>(t.df));
    put_u64(out, static_cast<uint64_t>(t.cf));
    for (const auto& [di, tf] : t.postings) {
      put_u32(out, static_cast<uint32_t>(di));
      put_u32(out, static_cast<uint32_t>(tf));
    }
  }
  if (!out) throw DataError("short write on index snapshot: " + path);
}

Index Index::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open index snapshot: " + path);
  char magic[sizeof(kMagic) - 1];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw DataError(path + ": not a PQRIDX1 index snapshot");
  uint32_t version = get_u32(in);
  if (version != kVersion)
    throw DataError(path + ": unsupported snapshot version " + std::to_string(version));

  Index idx;
  idx.meta_.stemmer = get_str(in);
  idx.meta_.stopword_hash = get_u64(in);
  idx.meta_.build_unix_time = static_cast<int64_t>(get_u64(in));
  uint32_t n_docs = get_u32(in);
  idx.total_terms_ = static_cast<int64_t>(get_u64(in));
  uint32_t n_terms = get_u32(in);

  idx.docs_.resize(n_docs);
  for (uint32_t i = 0; i < n_docs; ++i) {
    idx.docs_[i].docid = get_str(in);
    idx.docs_[i].length = static_cast<int32_t>(get_u32(in));
  }
  idx.terms_.resize(n_terms);
  for (uint32_t i = 0; i < n_terms; ++i) {
    TermInfo& t = idx.terms_[i];
    t.text = get_str(in);
    t.df = static_cast<int32_t>(get_u32(in));
    t.cf = static_cast<int64_t>(get_u64(in));
    t.postings.resize(t.df);
    for (auto& [di, tf] : t.postings) {
      di = static_cast<DocIdx>(get_u32(in));
      tf = static_cast<int32_t>(get_u32(in));
      if (di < 0 || di >= static_cast<DocIdx>(n_docs))
        throw DataError(path + ": posting references unknown document");
      idx.docs_[di].terms.emplace_back(static_cast<TermId>(i), tf);
    }
  }
  // Forward vectors were filled in term order, which is already sorted by id.
  idx.build_lookups();
  return idx;
}

void Index::dump_stats_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write stats file: " + path);
  out << "term,df,cf\n";
  for (const TermInfo& t : terms_) out << t.text << ',' << t.df << ',' << t.cf << '\n';
}

}  // namespace pqr
