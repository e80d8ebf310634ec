#include "pqr/features.hpp"

#include <algorithm>
#include <cmath>

#include "pqr/errors.hpp"
#include "pqr/metrics.hpp"

namespace pqr {

namespace {
constexpr int kFeedbackDocs = 10;   // feedback depth for feature language models
constexpr int kAutocorrDocs = 30;   // document window for score autocorrelation
}  // namespace

const std::array<std::string, FeatureSchema::kSize>& FeatureSchema::names() {
  static const std::array<std::string, kSize> kNames = [] {
    std::array<std::string, kSize> n;
    size_t i = 0;
    n[i++] = "q.mean_idf";
    n[i++] = "q.max_idf";
    n[i++] = "q.min_idf";
    n[i++] = "q.sc";
    n[i++] = "q.qs";
    n[i++] = "q.len";
    n[i++] = "r.clarity_b";
    n[i++] = "r.score_autocorr";
    for (const char* ref : {"q0", "parent"}) {
      std::string p(ref);
      n[i++] = p + ".tau_ap";
      n[i++] = p + ".lm_bhatta";
      for (const char* group : {"del", "keep", "add"}) {
        n[i++] = p + "." + group + ".mean_idf";
        n[i++] = p + "." + group + ".sc";
        n[i++] = p + "." + group + ".qs";
      }
    }
    return n;
  }();
  return kNames;
}

QuerySignals query_signals(const Index& index, std::span<const std::string> terms) {
  QuerySignals s;
  if (terms.empty()) return s;

  double n_docs = static_cast<double>(index.n_docs());
  double total = static_cast<double>(index.total_terms());
  double oov_floor = 1.0 / (2.0 * total);
  double p_ml = 1.0 / static_cast<double>(terms.size());

  double sum_idf = 0;
  s.max_idf = -1e300;
  s.min_idf = 1e300;
  std::vector<DocIdx> matched;
  for (const auto& w : terms) {
    double idf = index.idf(w);
    sum_idf += idf;
    s.max_idf = std::max(s.max_idf, idf);
    s.min_idf = std::min(s.min_idf, idf);
    auto t = index.term_id(w);
    double pc = oov_floor;
    if (t) {
      pc = static_cast<double>(index.term(*t).cf) / total;
      for (const auto& [d, tf] : index.term(*t).postings) matched.push_back(d);
    }
    s.sc += p_ml * std::log(p_ml / pc);
  }
  s.mean_idf = sum_idf / static_cast<double>(terms.size());
  s.len = static_cast<double>(terms.size());

  std::sort(matched.begin(), matched.end());
  matched.erase(std::unique(matched.begin(), matched.end()), matched.end());
  if (matched.empty())
    s.qs = std::log(2.0 * n_docs);
  else
    s.qs = -std::log(static_cast<double>(matched.size()) / n_docs);
  return s;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return 0;
  return sxy / std::sqrt(sxx * syy);
}

LanguageModel feedback_lm(const Index& index, const ResultList& results, DocLmCache* cache) {
  return relevance_model(index, results, kFeedbackDocs, cache);
}

}  // namespace

ResultSignals result_signals(const Index& index, const ResultList& results, DocLmCache* cache) {
  ResultSignals s;
  if (results.empty()) return s;

  s.clarity_b = bhattacharyya(feedback_lm(index, results, cache), index.collection_lm());

  size_t n = std::min<size_t>(results.entries.size(), kAutocorrDocs);
  if (n < 3) return s;

  double smin = 1e300, smax = -1e300;
  for (size_t i = 0; i < n; ++i) {
    smin = std::min(smin, results.entries[i].score);
    smax = std::max(smax, results.entries[i].score);
  }
  if (smax <= smin) return s;  // constant scores carry no signal

  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) y[i] = (results.entries[i].score - smin) / (smax - smin);

  DocLmCache local(index);
  DocLmCache& lms = cache ? *cache : local;
  std::vector<const LanguageModel*> doc_lms(n);
  for (size_t i = 0; i < n; ++i) {
    auto d = index.doc_idx(results.entries[i].docid);
    if (!d) throw DataError("result docid not in index: " + results.entries[i].docid);
    doc_lms[i] = &lms.get(*d);
  }

  // Similarity-weighted average of the other documents' scores.
  std::vector<double> sim(n * n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double b = bhattacharyya(*doc_lms[i], *doc_lms[j]);
      sim[i * n + j] = b;
      sim[j * n + i] = b;
    }
  std::vector<double> yhat(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double row = 0;
    for (size_t j = 0; j < n; ++j) row += sim[i * n + j];
    if (row <= 0) continue;
    double acc = 0;
    for (size_t j = 0; j < n; ++j) acc += sim[i * n + j] * y[j];
    yhat[i] = acc / row;
  }
  s.score_autocorr = pearson(y, yhat);
  return s;
}

namespace {

std::vector<std::string> set_difference(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::string> set_intersection(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

DriftSignals drift_signals(const Index& index, const Query& q_ref, const ResultList& r_ref,
                           const Query& q_t, const ResultList& r_t, DocLmCache* cache) {
  DriftSignals s;
  s.tau_ap = tau_ap(docids_of(r_ref), docids_of(r_t));
  if (!r_ref.empty() && !r_t.empty())
    s.lm_bhatta = bhattacharyya(feedback_lm(index, r_ref, cache), feedback_lm(index, r_t, cache));

  s.deleted = query_signals(index, set_difference(q_ref.terms(), q_t.terms()));
  s.preserved = query_signals(index, set_intersection(q_ref.terms(), q_t.terms()));
  s.introduced = query_signals(index, set_difference(q_t.terms(), q_ref.terms()));
  return s;
}

FeatureVector assemble(const Index& index, const Query& q0, const ResultList& r0,
                       const Query& q_parent, const ResultList& r_parent, const Query& q_t,
                       const ResultList& r_t, DocLmCache* cache) {
  FeatureVector fv;
  size_t i = 0;
  auto put = [&](double v) { fv.values[i++] = v; };

  QuerySignals q = query_signals(index, q_t.terms());
  put(q.mean_idf);
  put(q.max_idf);
  put(q.min_idf);
  put(q.sc);
  put(q.qs);
  put(q.len);

  ResultSignals r = result_signals(index, r_t, cache);
  put(r.clarity_b);
  put(r.score_autocorr);

  for (int ref = 0; ref < 2; ++ref) {
    const Query& q_ref = ref == 0 ? q0 : q_parent;
    const ResultList& r_ref = ref == 0 ? r0 : r_parent;
    DriftSignals d = drift_signals(index, q_ref, r_ref, q_t, r_t, cache);
    put(d.tau_ap);
    put(d.lm_bhatta);
    for (const QuerySignals* g : {&d.deleted, &d.preserved, &d.introduced}) {
      put(g->mean_idf);
      put(g->sc);
      put(g->qs);
    }
  }

  for (double v : fv.values)
    if (!std::isfinite(v)) throw std::logic_error("non-finite feature value");
  return fv;
}

}  // namespace pqr
