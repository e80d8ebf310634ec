#include "pqr/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "pqr/errors.hpp"
#include "pqr/rng.hpp"
#include "pqr/util.hpp"

namespace pqr {

namespace {

constexpr int kCommonTerms = 3;
constexpr int kExclusiveTerms = 5;
constexpr int kTopicalTerms = kCommonTerms + kExclusiveTerms;
constexpr double kZipfExponent = 0.6;

// Per-token emission rates.
constexpr double kRelExclusiveRate[2] = {0.18, 0.28};  // grade 1, grade 2
constexpr double kRelCommonRate[2] = {0.05, 0.06};
constexpr double kDistractorCommonRate = 0.10;
constexpr double kBackgroundLeakRate = 0.01;

struct PendingDoc {
  std::vector<std::string> terms;
  int topic = -1;  // graded topic, or -1
  int grade = 0;
};

class ZipfSampler {
 public:
  ZipfSampler(int n, double exponent) : cumulative_(n) {
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      acc += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
      cumulative_[i] = acc;
    }
  }
  int draw(Rng& rng) const {
    double target = rng.uniform() * cumulative_.back();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
    return static_cast<int>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

SyntheticData generate_synthetic(int n_docs, int n_topics, int vocab_size, uint64_t seed) {
  if (n_topics < 1) throw UsageError("n_topics must be >= 1");
  if (n_docs < 10 * n_topics)
    throw UsageError("n_docs must be at least 10 * n_topics");
  if (vocab_size < 20 * n_topics)
    throw UsageError("vocab_size must be at least 20 * n_topics");

  int n_background_terms = vocab_size - kTopicalTerms * n_topics;
  std::vector<std::string> background(n_background_terms);
  for (int i = 0; i < n_background_terms; ++i) background[i] = "w" + std::to_string(i);
  auto common = [&](int topic, int j) {
    return "t" + std::to_string(topic) + "c" + std::to_string(j);
  };
  auto exclusive = [&](int topic, int j) {
    return "t" + std::to_string(topic) + "x" + std::to_string(j);
  };

  Rng rng(mix64(seed));
  ZipfSampler zipf(n_background_terms, kZipfExponent);

  int rel_per_topic = std::clamp(n_docs / (5 * n_topics), 2, 12);
  int distractors_per_topic = std::clamp(n_docs / (4 * n_topics), 2, 20);

  std::vector<PendingDoc> pending;
  pending.reserve(n_docs);

  auto doc_length = [&] { return 60 + static_cast<int>(rng.below(60)); };
  auto background_token = [&] { return background[zipf.draw(rng)]; };

  for (int t = 0; t < n_topics; ++t) {
    for (int r = 0; r < rel_per_topic; ++r) {
      PendingDoc d;
      d.topic = t;
      d.grade = (r % 3 == 0) ? 2 : 1;
      int len = doc_length();
      d.terms.reserve(len);
      // Every graded document carries at least one common and one exclusive
      // topical term.
      d.terms.push_back(common(t, r % kCommonTerms));
      d.terms.push_back(exclusive(t, r % kExclusiveTerms));
      double p_exc = kRelExclusiveRate[d.grade - 1];
      double p_com = kRelCommonRate[d.grade - 1];
      for (int i = 2; i < len; ++i) {
        double u = rng.uniform();
        if (u < p_exc)
          d.terms.push_back(exclusive(t, static_cast<int>(rng.below(kExclusiveTerms))));
        else if (u < p_exc + p_com)
          d.terms.push_back(common(t, static_cast<int>(rng.below(kCommonTerms))));
        else
          d.terms.push_back(background_token());
      }
      pending.push_back(std::move(d));
    }
    for (int r = 0; r < distractors_per_topic; ++r) {
      PendingDoc d;
      int len = doc_length();
      d.terms.reserve(len);
      for (int i = 0; i < len; ++i) {
        if (rng.uniform() < kDistractorCommonRate)
          d.terms.push_back(common(t, static_cast<int>(rng.below(kCommonTerms))));
        else
          d.terms.push_back(background_token());
      }
      pending.push_back(std::move(d));
    }
  }
  while (static_cast<int>(pending.size()) < n_docs) {
    PendingDoc d;
    int len = doc_length();
    d.terms.reserve(len);
    for (int i = 0; i < len; ++i) {
      if (rng.uniform() < kBackgroundLeakRate) {
        int t = static_cast<int>(rng.below(n_topics));
        d.terms.push_back(common(t, static_cast<int>(rng.below(kCommonTerms))));
      } else {
        d.terms.push_back(background_token());
      }
    }
    pending.push_back(std::move(d));
  }
  pending.resize(n_docs);  // graded docs always fit: (rel + distractors) * topics <= n_docs / 2
  rng.shuffle(pending);

  SyntheticData out;
  out.docs.reserve(n_docs);
  int width = static_cast<int>(std::to_string(n_docs).size());
  for (int i = 0; i < n_docs; ++i) {
    std::string num = std::to_string(i + 1);
    Document doc;
    doc.docid = "D" + std::string(width - static_cast<int>(num.size()), '0') + num;
    doc.terms = std::move(pending[i].terms);
    doc.text = join(doc.terms, " ");
    out.docs.push_back(std::move(doc));
    if (pending[i].topic >= 0) {
      std::string qid = std::to_string(101 + pending[i].topic);
      out.qrels.set(qid, out.docs.back().docid, pending[i].grade);
    }
  }

  for (int t = 0; t < n_topics; ++t) {
    Topic topic;
    topic.qid = std::to_string(101 + t);
    int title_len = 2 + static_cast<int>(rng.below(2));
    std::vector<std::string> picks;
    for (int j = 0; j < kCommonTerms; ++j) picks.push_back(common(t, j));
    rng.shuffle(picks);
    picks.resize(title_len);
    topic.title_terms = picks;
    std::sort(topic.title_terms.begin(), topic.title_terms.end());
    topic.raw_title = join(topic.title_terms, " ");
    out.topics.push_back(std::move(topic));
  }
  return out;
}

}  // namespace pqr
