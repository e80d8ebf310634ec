#include "pqr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "pqr/errors.hpp"
#include "pqr/metrics.hpp"
#include "pqr/parallel.hpp"
#include "pqr/rng.hpp"
#include "pqr/util.hpp"

namespace pqr {

PartitionPlan partition_topics(const std::vector<Topic>& topics, uint64_t seed) {
  if (topics.size() < 10) throw DataError("partitioning requires at least 10 topics");
  std::vector<std::string> qids;
  qids.reserve(topics.size());
  for (const auto& t : topics) qids.push_back(t.qid);
  Rng rng(mix64(seed));
  rng.shuffle(qids);

  size_t n = qids.size();
  size_t n_train = n * 6 / 10;
  size_t n_val = n * 2 / 10;

  PartitionPlan plan;
  plan.seed = seed;
  plan.train.resize(6);
  for (size_t i = 0; i < n_train; ++i) plan.train[i % 6].push_back(qids[i]);
  size_t v0_size = (n_val + 1) / 2;
  for (size_t i = 0; i < n_val; ++i) {
    auto& side = i < v0_size ? plan.v0 : plan.v1;
    side.push_back(qids[n_train + i]);
  }
  for (size_t i = n_train + n_val; i < n; ++i) plan.test.push_back(qids[i]);
  return plan;
}

double OracleScorer::score(const Query&, const ResultList& results, const FeatureVector&) const {
  ResultList scored = results;
  scored.qid = qid_;
  return ndcg_at_k(scored, *qrels_, k_);
}

std::vector<TrainingInstance> collect_instances(const Index& index,
                                                const std::vector<CollectSession>& sessions,
                                                const CandidateScorer& scorer,
                                                const SearchParams& sp, const RetrievalParams& rp,
                                                const QrelSet& qrels, int threads,
                                                const Logger& log) {
  std::vector<std::vector<TrainingInstance>> slots(sessions.size());
  std::vector<std::string> warnings(sessions.size());

  parallel_for(sessions.size(), threads, [&](size_t si) {
    const CollectSession& s = sessions[si];
    if (!qrels.has_topic(s.qid)) {
      warnings[si] = "topic " + s.qid + " has no judgments; skipped";
      return;
    }
    RetrievalParams pool_rp = rp;
    pool_rp.k = rp.pool_size;
    ResultList pool = retrieve(index, s.query, pool_rp);
    pool.qid = s.qid;
    if (pool.empty()) {
      warnings[si] = "topic " + s.qid + " retrieved nothing; skipped";
      return;
    }
    double ndcg0 = ndcg_at_k(pool, qrels, 30);

    DocLmCache cache(index);
    auto observer = [&](const VisitedNode& v) {
      ResultList scored = v.results;
      scored.qid = s.qid;
      double truth = ndcg_at_k(scored, qrels, 30);
      slots[si].push_back({s.session_id, v.fv, truth, truth - ndcg0});
    };
    query_search(index, s.query, pool, scorer, sp, rp, nullptr, observer, &cache);
  });

  std::vector<TrainingInstance> out;
  for (size_t si = 0; si < sessions.size(); ++si) {
    if (!warnings[si].empty() && log) log(warnings[si]);
    for (auto& inst : slots[si]) out.push_back(std::move(inst));
  }
  return out;
}

namespace {

// Uniform mixture of the relevant documents' MLE language models.
LanguageModel true_relevance_model(const Index& index, const std::string& qid,
                                   const QrelSet& qrels) {
  const auto* judged = qrels.topic(qid);
  std::vector<DocIdx> rel;
  if (judged)
    for (const auto& [docid, grade] : *judged) {
      if (grade <= 0) continue;
      auto d = index.doc_idx(docid);
      if (d) rel.push_back(*d);
    }
  if (rel.empty()) throw DataError("topic " + qid + " has no relevant documents in the index");

  std::map<TermId, double> mix;
  double w = 1.0 / static_cast<double>(rel.size());
  for (DocIdx d : rel) {
    LanguageModel lm = index.doc_lm(d);
    for (const auto& [t, p] : lm.probs) mix[t] += w * p;
  }
  LanguageModel out;
  out.probs.assign(mix.begin(), mix.end());
  return out;
}

// Weight-proportional draw from `lm`, excluding terms already in `q`.
// Returns nullopt when nothing outside the query carries mass.
std::optional<std::string> sample_term(const Index& index, const LanguageModel& lm,
                                       const Query& q, Rng& rng) {
  double mass = 0;
  for (const auto& [t, p] : lm.probs)
    if (!q.contains(index.term(t).text)) mass += p;
  if (mass <= 0) return std::nullopt;
  double target = rng.uniform() * mass;
  double acc = 0;
  for (const auto& [t, p] : lm.probs) {
    const std::string& text = index.term(t).text;
    if (q.contains(text)) continue;
    acc += p;
    if (acc >= target) return text;
  }
  // Floating-point slack: fall back to the last eligible term.
  for (auto it = lm.probs.rbegin(); it != lm.probs.rend(); ++it)
    if (!q.contains(index.term(it->first).text)) return index.term(it->first).text;
  return std::nullopt;
}

}  // namespace

Query perturb_query(const Index& index, const Topic& topic, const QrelSet& qrels,
                    const ResultList& pool, const RetrievalParams& rp, uint64_t seed,
                    const Logger& log) {
  LanguageModel rel_lm = true_relevance_model(index, topic.qid, qrels);
  Query original(topic.title_terms);
  if (pool.empty()) return original;

  double base_ndcg = ndcg_at_k(pool, qrels, 30);
  Rng rng(mix64(seed));
  Query q = original;
  for (int attempt = 0; attempt < 50; ++attempt) {
    bool add = rng.uniform() < 0.5 || q.size() == 1;
    if (add) {
      auto term = sample_term(index, rel_lm, q, rng);
      if (!term) {
        add = false;
        if (q.size() == 1) break;  // nothing to add, nothing to drop
      } else {
        q = q.with(*term);
      }
    }
    if (!add) q = q.without(q.terms()[rng.below(q.size())]);

    ResultList r = rerank(index, q, pool, rp);
    if (jaccard_top_k(r, pool, 10) < 0.50 && ndcg_at_k(r, qrels, 30) >= 0.75 * base_ndcg)
      return q;
  }
  if (log) log("topic " + topic.qid + ": perturbation did not converge; using original query");
  return original;
}

namespace {

struct ValidationCache {
  // One search per (topic, model checkpoint); merged lists per m are derived
  // from prefixes of the same top list.
  const Index& index;
  const SearchParams& sp;
  const RetrievalParams& rp;
  const QrelSet& qrels;

  double mean_ndcg(const std::vector<const Topic*>& topics, int m,
                   const std::map<std::string, PqrOutcome>& outcomes) const {
    if (topics.empty()) return 0;
    double sum = 0;
    for (const Topic* t : topics) {
      auto it = outcomes.find(t->qid);
      if (it == outcomes.end()) continue;
      const PqrOutcome& o = it->second;
      if (o.top.empty()) {
        sum += ndcg_at_k(o.merged, qrels, 30);
        continue;
      }
      size_t take = std::min<size_t>(m, o.top.size());
      std::vector<ResultList> lists;
      std::vector<double> weights;
      for (size_t i = 0; i < take; ++i) {
        lists.push_back(rerank(index, o.top[i].first, o.pool, rp));
        weights.push_back(o.top[i].second);
      }
      ResultList merged = borda_merge(lists, weights, rp.k);
      merged.qid = t->qid;
      sum += ndcg_at_k(merged, qrels, 30);
    }
    return sum / static_cast<double>(topics.size());
  }

  std::map<std::string, PqrOutcome> run_searches(const std::vector<const Topic*>& topics,
                                                 const LinearRankModel& model, int max_m,
                                                 int threads) const {
    std::vector<PqrOutcome> slots(topics.size());
    ModelScorer scorer(model);
    SearchParams wide = sp;
    wide.m = max_m;
    parallel_for(topics.size(), threads, [&](size_t i) {
      slots[i] = pqr_retrieve(index, topics[i]->qid, Query(topics[i]->title_terms), scorer, wide,
                              rp, false);
    });
    std::map<std::string, PqrOutcome> out;
    for (size_t i = 0; i < topics.size(); ++i) out.emplace(topics[i]->qid, std::move(slots[i]));
    return out;
  }
};

}  // namespace

DaggerResult dagger_loop(const Index& index, const std::vector<Topic>& topics,
                         const PartitionPlan& plan, const DaggerConfig& cfg, const QrelSet& qrels,
                         uint64_t seed, const Logger& log) {
  if (cfg.passes < 1) throw UsageError("passes must be >= 1");
  if (cfg.C_grid.empty() || cfg.m_grid.empty()) throw UsageError("C and m grids must be non-empty");
  cfg.search.validate();
  cfg.retrieval.validate();

  std::map<std::string, const Topic*> by_qid;
  for (const auto& t : topics) by_qid.emplace(t.qid, &t);
  auto lookup = [&](const std::vector<std::string>& qids) {
    std::vector<const Topic*> out;
    for (const auto& qid : qids) {
      auto it = by_qid.find(qid);
      if (it == by_qid.end()) throw DataError("partition references unknown topic " + qid);
      out.push_back(it->second);
    }
    return out;
  };
  std::vector<const Topic*> v0_topics = lookup(plan.v0);
  std::vector<const Topic*> v1_topics = lookup(plan.v1);

  int max_m = *std::max_element(cfg.m_grid.begin(), cfg.m_grid.end());
  ValidationCache validator{index, cfg.search, cfg.retrieval, qrels};

  DaggerResult result;
  result.v0_qids = plan.v0;
  std::vector<TrainingInstance> instances;
  LinearRankModel current;
  bool have_model = false;
  double best_v1 = -1;

  for (int pass = 1; pass <= cfg.passes; ++pass) {
    for (int subset = 0; subset < 6; ++subset) {
      std::vector<const Topic*> subset_topics = lookup(plan.train[subset]);

      // Assemble the sessions for this subset; later passes perturb q0.
      std::vector<CollectSession> sessions;
      for (const Topic* t : subset_topics) {
        CollectSession s;
        s.qid = t->qid;
        s.session_id = t->qid + "#p" + std::to_string(pass);
        if (pass == 1) {
          s.query = Query(t->title_terms);
        } else {
          RetrievalParams pool_rp = cfg.retrieval;
          pool_rp.k = cfg.retrieval.pool_size;
          ResultList pool = retrieve(index, Query(t->title_terms), pool_rp);
          pool.qid = t->qid;
          bool has_rel = false;
          if (const auto* judged = qrels.topic(t->qid))
            for (const auto& [docid, grade] : *judged) has_rel |= grade > 0;
          if (pool.empty() || !has_rel) {
            s.query = Query(t->title_terms);
          } else {
            uint64_t pseed = derive_seed(derive_seed(seed, t->qid), static_cast<uint64_t>(pass));
            s.query = perturb_query(index, *t, qrels, pool, cfg.retrieval, pseed, log);
          }
        }
        sessions.push_back(std::move(s));
      }

      std::vector<TrainingInstance> fresh;
      if ((pass == 1 && subset == 0) || !have_model) {
        // No model exists yet: gather under per-topic oracle scorers.
        std::vector<std::vector<TrainingInstance>> parts(sessions.size());
        parallel_for(sessions.size(), cfg.threads, [&](size_t i) {
          OracleScorer oracle(qrels, sessions[i].qid);
          parts[i] = collect_instances(index, {sessions[i]}, oracle, cfg.search, cfg.retrieval,
                                       qrels, 1, {});
        });
        for (auto& p : parts)
          for (auto& inst : p) fresh.push_back(std::move(inst));
      } else {
        ModelScorer scorer(current);
        fresh = collect_instances(index, sessions, scorer, cfg.search, cfg.retrieval, qrels,
                                  cfg.threads, log);
      }
      for (const auto& s : sessions) result.train_qids.push_back(s.qid);
      for (auto& inst : fresh) instances.push_back(std::move(inst));

      std::vector<RankPair> pairs = make_pairs(instances, cfg.pair_delta);
      if (pairs.empty()) {
        if (log) log("pass " + std::to_string(pass) + " subset " + std::to_string(subset) +
                     ": no training pairs yet; keeping previous model");
        continue;
      }

      // Joint (C, m) selection on v0: strictly better wins; ties prefer the
      // smaller C, then the smaller m.
      uint64_t train_seed = derive_seed(seed, "train");
      double best_v0 = -1;
      double chosen_C = cfg.C_grid.front();
      int chosen_m = cfg.m_grid.front();
      LinearRankModel chosen_model;
      std::vector<double> C_sorted = cfg.C_grid;
      std::sort(C_sorted.begin(), C_sorted.end());
      std::vector<int> m_sorted = cfg.m_grid;
      std::sort(m_sorted.begin(), m_sorted.end());
      for (double C : C_sorted) {
        LinearRankModel candidate = train_pairwise(pairs, C, train_seed);
        auto outcomes = validator.run_searches(v0_topics, candidate, max_m, cfg.threads);
        for (int m : m_sorted) {
          double score = validator.mean_ndcg(v0_topics, m, outcomes);
          if (score > best_v0) {
            best_v0 = score;
            chosen_C = C;
            chosen_m = m;
            chosen_model = candidate;
          }
        }
      }
      current = std::move(chosen_model);
      current.manifest.pass = pass;
      current.manifest.subset = subset;
      current.manifest.merge_count = chosen_m;
      current.manifest.seed = seed;
      have_model = true;

      auto v1_outcomes = validator.run_searches(v1_topics, current, max_m, cfg.threads);
      double v1 = validator.mean_ndcg(v1_topics, chosen_m, v1_outcomes);
      current.manifest.v1_score = v1;

      result.log.push_back({pass, subset, static_cast<int64_t>(instances.size()), chosen_C,
                            chosen_m, best_v0, v1});
      if (log)
        log("pass " + std::to_string(pass) + " subset " + std::to_string(subset) + ": " +
            std::to_string(instances.size()) + " instances, C=" + fmt_full(chosen_C) +
            ", m=" + std::to_string(chosen_m) + ", v0=" + fmt_full(best_v0) +
            ", v1=" + fmt_full(v1));

      if (!cfg.checkpoint_dir.empty()) {
        std::filesystem::create_directories(cfg.checkpoint_dir);
        save_model(current, cfg.checkpoint_dir + "/model_p" + std::to_string(pass) + "_t" +
                                std::to_string(subset) + ".txt");
      }
      if (v1 > best_v1) {
        best_v1 = v1;
        result.model = current;
      }
    }
  }
  if (!have_model) throw DataError("training produced no model (no usable topics or pairs)");
  return result;
}

void write_train_log(const std::vector<TrainLogRow>& rows, const std::string& path,
                     const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write training log: " + path);
  for (const auto& line : header_comments) out << "# " << line << '\n';
  out << "pass,subset,n_instances,best_C,m,v0_ndcg30,v1_ndcg30\n";
  for (const auto& r : rows)
    out << r.pass << ',' << r.subset << ',' << r.n_instances << ',' << fmt_full(r.best_C) << ','
        << r.m << ',' << fmt_full(r.v0_ndcg30) << ',' << fmt_full(r.v1_ndcg30) << '\n';
}

}  // namespace pqr
