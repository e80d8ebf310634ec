#pragma once

#include <map>
#include <string>
#include <vector>

#include "pqr/text.hpp"

namespace pqr {

struct Document {
  std::string docid;
  std::string text;                 // raw, as read from the source
  std::vector<std::string> terms;   // normalized tokens, in document order
};

struct Topic {
  std::string qid;
  std::string raw_title;
  std::vector<std::string> title_terms;  // normalized, non-empty
};

/// Relevance judgments keyed by (qid, docid). Unjudged pairs read as grade 0.
class QrelSet {
 public:
  void set(const std::string& qid, const std::string& docid, int grade);
  int grade(const std::string& qid, const std::string& docid) const;
  /// Judged docs for a topic, or nullptr when the topic is unjudged.
  const std::map<std::string, int>* topic(const std::string& qid) const;
  bool has_topic(const std::string& qid) const { return by_qid_.count(qid) > 0; }
  const std::map<std::string, std::map<std::string, int>>& all() const { return by_qid_; }
  size_t topic_count() const { return by_qid_.size(); }

 private:
  std::map<std::string, std::map<std::string, int>> by_qid_;
};

enum class CorpusFormat { trectext, jsonl };

CorpusFormat corpus_format_from_name(const std::string& name);

/// Parses an entire corpus file. Errors carry the byte offset of the
/// offending record and the docid when it is known.
std::vector<Document> parse_corpus(const std::string& path, CorpusFormat format,
                                   const Stopwords& stopwords);

std::vector<Topic> parse_topics(const std::string& path, const Stopwords& stopwords);
QrelSet parse_qrels(const std::string& path);

void write_topics(const std::vector<Topic>& topics, const std::string& path);
void write_qrels(const QrelSet& qrels, const std::string& path);
void write_corpus_jsonl(const std::vector<Document>& docs, const std::string& path);
void write_corpus_trectext(const std::vector<Document>& docs, const std::string& path);

}  // namespace pqr
