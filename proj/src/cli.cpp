#include "pqr/cli.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "pqr/corpus.hpp"
#include "pqr/errors.hpp"
#include "pqr/index.hpp"
#include "pqr/metrics.hpp"
#include "pqr/parallel.hpp"
#include "pqr/ranker.hpp"
#include "pqr/run_io.hpp"
#include "pqr/search.hpp"
#include "pqr/simulator.hpp"
#include "pqr/synthetic.hpp"
#include "pqr/trainer.hpp"
#include "pqr/util.hpp"

namespace pqr {
namespace {

namespace fs = std::filesystem;

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void write_config_header(std::ostream& out, const ConfigEcho& config) {
  for (const auto& [k, v] : config) out << "# " << k << '=' << v << '\n';
}

Stopwords load_stopwords(const std::string& path) {
  return path.empty() ? Stopwords::smart() : Stopwords::from_file(path);
}

void check_stopword_hash(const Index& index, const Stopwords& sw) {
  if (index.meta().stopword_hash != sw.content_hash())
    std::cerr << "warning: stopword list differs from the one the index was built with\n";
  if (index.meta().stemmer != "porter-fixpoint")
    std::cerr << "warning: index was built with stemmer '" << index.meta().stemmer << "'\n";
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0;
    if (!parse_double(trim(item), v)) throw UsageError(std::string("bad value in ") + what);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(what) + " must not be empty");
  return out;
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  for (double v : parse_double_list(csv, what)) out.push_back(static_cast<int>(v));
  return out;
}

struct BaselineArgs {
  std::string index_path, topics_path, out_path, stopwords_path, tag;
  double mu = 1000;
  int k = 1000;
  int threads = 1;
};

void run_topics_to_run_file(const Index& index, const std::vector<Topic>& topics,
                            const std::string& out_path, const std::string& tag, int threads,
                            const std::function<ResultList(const Topic&)>& retrieve_topic) {
  std::vector<ResultList> results(topics.size());
  parallel_for(topics.size(), threads, [&](size_t i) {
    results[i] = retrieve_topic(topics[i]);
    results[i].qid = topics[i].qid;
  });
  RunFile run;
  run.tag = tag;
  run.topics = std::move(results);
  write_run(run, out_path);
}

int cmd_synth(const std::string& out_dir, int docs, int topics, int vocab, uint64_t seed,
              const std::string& format) {
  SyntheticData data = generate_synthetic(docs, topics, vocab, seed);
  fs::create_directories(out_dir);
  std::string corpus_path;
  if (format == "jsonl") {
    corpus_path = out_dir + "/corpus.jsonl";
    write_corpus_jsonl(data.docs, corpus_path);
  } else if (format == "trectext") {
    corpus_path = out_dir + "/corpus.trectext";
    write_corpus_trectext(data.docs, corpus_path);
  } else {
    throw UsageError("unknown format: " + format);
  }
  write_topics(data.topics, out_dir + "/topics.tsv");
  write_qrels(data.qrels, out_dir + "/qrels.txt");
  std::cout << "wrote " << data.docs.size() << " docs, " << data.topics.size() << " topics to "
            << out_dir << '\n';
  return 0;
}

int cmd_index(const std::string& corpus_path, const std::string& format_name,
              const std::string& out_path, const std::string& stopwords_path) {
  Stopwords sw = load_stopwords(stopwords_path);
  auto docs = parse_corpus(corpus_path, corpus_format_from_name(format_name), sw);
  IndexMeta meta;
  meta.stopword_hash = sw.content_hash();
  meta.build_unix_time = static_cast<int64_t>(std::time(nullptr));
  Index index = Index::build(docs, meta);
  index.save(out_path);
  std::cout << "indexed " << index.n_docs() << " docs, " << index.vocab_size() << " terms, "
            << index.total_terms() << " tokens -> " << out_path << '\n';
  return 0;
}

int cmd_stats(const std::string& index_path, const std::string& out_path) {
  Index index = Index::load(index_path);
  index.dump_stats_csv(out_path);
  std::cout << "wrote term stats for " << index.vocab_size() << " terms -> " << out_path << '\n';
  return 0;
}

int cmd_ql(const BaselineArgs& a) {
  Stopwords sw = load_stopwords(a.stopwords_path);
  Index index = Index::load(a.index_path);
  check_stopword_hash(index, sw);
  auto topics = parse_topics(a.topics_path, sw);
  RetrievalParams rp{a.mu, a.k, a.k};
  rp.validate();
  run_topics_to_run_file(index, topics, a.out_path, a.tag, a.threads, [&](const Topic& t) {
    return retrieve(index, Query(t.title_terms), rp);
  });
  std::cout << "wrote " << a.out_path << '\n';
  return 0;
}

int cmd_rm3(const BaselineArgs& a, int fb_docs, int fb_terms, double lambda, int pool) {
  Stopwords sw = load_stopwords(a.stopwords_path);
  Index index = Index::load(a.index_path);
  check_stopword_hash(index, sw);
  auto topics = parse_topics(a.topics_path, sw);
  RetrievalParams rp{a.mu, a.k, pool};
  rp.validate();
  run_topics_to_run_file(index, topics, a.out_path, a.tag, a.threads, [&](const Topic& t) {
    return rm3_retrieve(index, Query(t.title_terms), rp, fb_docs, fb_terms, lambda);
  });
  std::cout << "wrote " << a.out_path << '\n';
  return 0;
}

int cmd_simulate(const std::string& index_path, const std::string& topics_path,
                 const std::string& qrels_path, const std::string& out_path,
                 const std::string& stopwords_path, const std::string& policy_name, int maxd,
                 uint64_t seed, double mu, int pool, int threads) {
  Stopwords sw = load_stopwords(stopwords_path);
  Index index = Index::load(index_path);
  check_stopword_hash(index, sw);
  auto topics = parse_topics(topics_path, sw);
  QrelSet qrels = parse_qrels(qrels_path);
  SimPolicy policy = SimPolicy::from_name(policy_name, seed);
  RetrievalParams rp{mu, pool, pool};
  rp.validate();

  std::vector<SimResult> results(topics.size());
  parallel_for(topics.size(), threads, [&](size_t i) {
    results[i] = qr_sim(index, topics[i].qid, Query(topics[i].title_terms), qrels, maxd, policy, rp);
  });

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw DataError("cannot write: " + out_path);
  write_config_header(out, {{"command", "simulate"},
                            {"policy", policy_name},
                            {"maxd", std::to_string(maxd)},
                            {"seed", std::to_string(seed)},
                            {"mu", fmt_full(mu)},
                            {"pool", std::to_string(pool)}});
  out << "qid,depth_reached,ndcg_start,ndcg_final\n";
  double sum_start = 0, sum_final = 0, sum_depth = 0;
  for (size_t i = 0; i < topics.size(); ++i) {
    const SimResult& r = results[i];
    double start = r.path.front().ndcg;
    double final_ = r.path.back().ndcg;
    size_t depth = r.path.size() - 1;
    sum_start += start;
    sum_final += final_;
    sum_depth += static_cast<double>(depth);
    out << topics[i].qid << ',' << depth << ',' << fmt_full(start) << ',' << fmt_full(final_)
        << '\n';
  }
  double n = static_cast<double>(topics.size());
  out << "all," << fmt_full(sum_depth / n) << ',' << fmt_full(sum_start / n) << ','
      << fmt_full(sum_final / n) << '\n';
  std::cout << "mean ndcg@30: start " << fmt_fixed6(sum_start / n) << " final "
            << fmt_fixed6(sum_final / n) << " (" << policy_name << ")\n";
  return 0;
}

struct TrainArgs {
  std::string index_path, topics_path, qrels_path, model_out, log_out, partition_out,
      checkpoint_dir, stopwords_path;
  uint64_t seed = 1;
  int passes = 3;
  SearchParams sp;
  RetrievalParams rp{1000, 1000, 1000};
  std::string c_grid = "0.1,1,10";
  std::string m_grid = "5,10,15,20";
  double delta = 0.01;
  int threads = 1;
};

int cmd_train(const TrainArgs& a) {
  Stopwords sw = load_stopwords(a.stopwords_path);
  Index index = Index::load(a.index_path);
  check_stopword_hash(index, sw);
  auto topics = parse_topics(a.topics_path, sw);
  QrelSet qrels = parse_qrels(a.qrels_path);

  PartitionPlan plan = partition_topics(topics, a.seed);
  DaggerConfig cfg;
  cfg.passes = a.passes;
  cfg.C_grid = parse_double_list(a.c_grid, "--c-grid");
  cfg.m_grid = parse_int_list(a.m_grid, "--m-grid");
  cfg.pair_delta = a.delta;
  cfg.search = a.sp;
  cfg.retrieval = a.rp;
  cfg.threads = a.threads;
  cfg.checkpoint_dir = a.checkpoint_dir;

  Logger log = [](const std::string& msg) { std::cerr << msg << '\n'; };
  DaggerResult result = dagger_loop(index, topics, plan, cfg, qrels, a.seed, log);
  save_model(result.model, a.model_out);

  std::vector<std::string> header = {
      "command=train",
      "seed=" + std::to_string(a.seed),
      "passes=" + std::to_string(a.passes),
      "n=" + std::to_string(a.sp.n) + " b=" + std::to_string(a.sp.b) +
          " d=" + std::to_string(a.sp.d),
      "mu=" + fmt_full(a.rp.mu) + " pool=" + std::to_string(a.rp.pool_size) +
          " k=" + std::to_string(a.rp.k),
      "c_grid=" + a.c_grid, "m_grid=" + a.m_grid, "delta=" + fmt_full(a.delta)};
  if (!a.log_out.empty()) write_train_log(result.log, a.log_out, header);

  if (!a.partition_out.empty()) {
    std::ofstream out(a.partition_out, std::ios::binary);
    if (!out) throw DataError("cannot write: " + a.partition_out);
    out << "subset,qid\n";
    for (size_t i = 0; i < plan.train.size(); ++i)
      for (const auto& qid : plan.train[i]) out << 't' << i << ',' << qid << '\n';
    for (const auto& qid : plan.v0) out << "v0," << qid << '\n';
    for (const auto& qid : plan.v1) out << "v1," << qid << '\n';
    for (const auto& qid : plan.test) out << "test," << qid << '\n';
  }
  std::cout << "best checkpoint: pass " << result.model.manifest.pass << " subset "
            << result.model.manifest.subset << " (C=" << fmt_full(result.model.manifest.C)
            << ", m=" << result.model.manifest.merge_count
            << ", v1 ndcg@30=" << fmt_fixed6(result.model.manifest.v1_score) << ") -> "
            << a.model_out << '\n';
  return 0;
}

struct ReformArgs {
  std::string index_path, topics_path, model_path, out_path, stopwords_path, tag = "pqr";
  std::string scorer = "model";
  std::string trace_out, features_out;
  uint64_t seed = 1;
  SearchParams sp;
  int m_override = 0;  // 0: model manifest (or sp.m for random scorer)
  RetrievalParams rp{1000, 1000, 1000};
  int threads = 1;
};

int cmd_reform(const ReformArgs& a) {
  Stopwords sw = load_stopwords(a.stopwords_path);
  Index index = Index::load(a.index_path);
  check_stopword_hash(index, sw);
  auto topics = parse_topics(a.topics_path, sw);

  LinearRankModel model;
  std::unique_ptr<CandidateScorer> scorer;
  SearchParams sp = a.sp;
  if (a.scorer == "model") {
    if (a.model_path.empty()) throw UsageError("--model is required with --scorer model");
    model = load_model(a.model_path);
    if (model.manifest.merge_count > 0 && a.m_override == 0)
      sp.m = model.manifest.merge_count;
    scorer = std::make_unique<ModelScorer>(model);
  } else if (a.scorer == "random") {
    scorer = std::make_unique<RandomScorer>(a.seed);
  } else {
    throw UsageError("unknown scorer: " + a.scorer + " (expected model or random)");
  }
  if (a.m_override > 0) sp.m = a.m_override;
  sp.validate();
  a.rp.validate();

  bool keep_features = !a.features_out.empty();
  std::vector<PqrOutcome> outcomes(topics.size());
  parallel_for(topics.size(), a.threads, [&](size_t i) {
    outcomes[i] = pqr_retrieve(index, topics[i].qid, Query(topics[i].title_terms), *scorer, sp,
                               a.rp, keep_features);
  });

  RunFile run;
  run.tag = a.tag;
  for (auto& o : outcomes) run.topics.push_back(std::move(o.merged));
  write_run(run, a.out_path);

  if (!a.trace_out.empty()) {
    std::ofstream out(a.trace_out, std::ios::binary);
    if (!out) throw DataError("cannot write: " + a.trace_out);
    for (size_t i = 0; i < topics.size(); ++i) {
      out << "# topic " << topics[i].qid << '\n';
      outcomes[i].trace.dump(out);
    }
  }
  if (keep_features) {
    std::ofstream out(a.features_out, std::ios::binary);
    if (!out) throw DataError("cannot write: " + a.features_out);
    out << "qid,query";
    for (const auto& name : FeatureSchema::names()) out << ',' << name;
    out << '\n';
    for (size_t i = 0; i < topics.size(); ++i) {
      for (size_t v = 0; v < outcomes[i].visited_queries.size(); ++v) {
        out << topics[i].qid << ',' << outcomes[i].visited_queries[v].joined('|');
        for (double x : outcomes[i].visited_features[v].values) out << ',' << fmt_full(x);
        out << '\n';
      }
    }
  }
  std::cout << "wrote " << a.out_path << '\n';
  return 0;
}

int cmd_eval(const std::string& run_path, const std::string& qrels_path,
             const std::string& metrics_csv, const std::string& out_path) {
  RunFile run = read_run(run_path);
  QrelSet qrels = parse_qrels(qrels_path);
  std::vector<MetricSpec> specs;
  {
    std::stringstream ss(metrics_csv);
    std::string item;
    while (std::getline(ss, item, ',')) specs.push_back(MetricSpec::from_name(std::string(trim(item))));
  }
  if (specs.empty()) throw UsageError("no metrics requested");

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw DataError("cannot write: " + out_path);
    out = &file;
  }
  write_config_header(*out, {{"command", "eval"}, {"run", run_path}, {"metrics", metrics_csv}});
  *out << "qid,metric,value\n";
  for (const auto& spec : specs) {
    double sum = 0;
    for (const auto& topic : run.topics) {
      double v = eval_metric(spec, topic, qrels);
      sum += v;
      *out << topic.qid << ',' << spec.name() << ',' << fmt_full(v) << '\n';
    }
    double mean = run.topics.empty() ? 0 : sum / static_cast<double>(run.topics.size());
    *out << "all," << spec.name() << ',' << fmt_full(mean) << '\n';
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& run_paths, const std::string& qrels_path,
               const std::string& out_path) {
  QrelSet qrels = parse_qrels(qrels_path);
  const std::vector<MetricSpec> specs = {
      {MetricSpec::Kind::ndcg_cut, 5},  {MetricSpec::Kind::ndcg_cut, 10},
      {MetricSpec::Kind::ndcg_cut, 20}, {MetricSpec::Kind::ndcg_cut, 30},
      {MetricSpec::Kind::ndcg, 0},      {MetricSpec::Kind::map, 0}};

  std::ostringstream table;
  table << "run";
  for (const auto& s : specs) table << ',' << s.name();
  table << '\n';
  for (const auto& path : run_paths) {
    RunFile run = read_run(path);
    std::string label = run.tag.empty() ? path : run.tag;
    table << label;
    for (const auto& spec : specs) {
      double sum = 0;
      for (const auto& topic : run.topics) sum += eval_metric(spec, topic, qrels);
      double mean = run.topics.empty() ? 0 : sum / static_cast<double>(run.topics.size());
      table << ',' << fmt_fixed6(mean);
    }
    table << '\n';
  }
  if (!out_path.empty()) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw DataError("cannot write: " + out_path);
    file << table.str();
  }
  std::cout << table.str();
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"pseudo-query reformulation toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic test collection");
  std::string synth_dir, synth_format = "jsonl";
  int synth_docs = 2000, synth_topics = 30, synth_vocab = 5000;
  uint64_t synth_seed = 1;
  synth->add_option("--out-dir", synth_dir)->required();
  synth->add_option("--docs", synth_docs);
  synth->add_option("--topics", synth_topics);
  synth->add_option("--vocab", synth_vocab);
  synth->add_option("--seed", synth_seed);
  synth->add_option("--format", synth_format);

  // index
  auto* index_cmd = app.add_subcommand("index", "build an index snapshot from a corpus");
  std::string idx_corpus, idx_format = "jsonl", idx_out, idx_stopwords;
  index_cmd->add_option("--corpus", idx_corpus)->required();
  index_cmd->add_option("--format", idx_format);
  index_cmd->add_option("--out", idx_out)->required();
  index_cmd->add_option("--stopwords", idx_stopwords);

  // stats
  auto* stats = app.add_subcommand("stats", "dump per-term df/cf statistics as CSV");
  std::string stats_index, stats_out;
  stats->add_option("--index", stats_index)->required();
  stats->add_option("--out", stats_out)->required();

  // ql
  auto* ql = app.add_subcommand("ql", "query-likelihood baseline run");
  BaselineArgs ql_args;
  ql_args.tag = "ql";
  ql->add_option("--index", ql_args.index_path)->required();
  ql->add_option("--topics", ql_args.topics_path)->required();
  ql->add_option("--out", ql_args.out_path)->required();
  ql->add_option("--stopwords", ql_args.stopwords_path);
  ql->add_option("--mu", ql_args.mu);
  ql->add_option("--k", ql_args.k);
  ql->add_option("--tag", ql_args.tag);
  ql->add_option("--threads", ql_args.threads);

  // rm3
  auto* rm3 = app.add_subcommand("rm3", "relevance-model (RM3) baseline run");
  BaselineArgs rm3_args;
  rm3_args.tag = "rm3";
  int rm3_fb_docs = 10, rm3_fb_terms = 20, rm3_pool = 1000;
  double rm3_lambda = 0.5;
  rm3->add_option("--index", rm3_args.index_path)->required();
  rm3->add_option("--topics", rm3_args.topics_path)->required();
  rm3->add_option("--out", rm3_args.out_path)->required();
  rm3->add_option("--stopwords", rm3_args.stopwords_path);
  rm3->add_option("--mu", rm3_args.mu);
  rm3->add_option("--k", rm3_args.k);
  rm3->add_option("--fb-docs", rm3_fb_docs);
  rm3->add_option("--fb-terms", rm3_fb_terms);
  rm3->add_option("--lambda", rm3_lambda);
  rm3->add_option("--pool", rm3_pool);
  rm3->add_option("--tag", rm3_args.tag);
  rm3->add_option("--threads", rm3_args.threads);

  // simulate
  auto* sim = app.add_subcommand("simulate", "oracle/random reformulation simulation");
  std::string sim_index, sim_topics, sim_qrels, sim_out, sim_stopwords, sim_policy = "oracle";
  int sim_maxd = 4, sim_pool = 1000, sim_threads = 1;
  uint64_t sim_seed = 1;
  double sim_mu = 1000;
  sim->add_option("--index", sim_index)->required();
  sim->add_option("--topics", sim_topics)->required();
  sim->add_option("--qrels", sim_qrels)->required();
  sim->add_option("--out", sim_out)->required();
  sim->add_option("--stopwords", sim_stopwords);
  sim->add_option("--policy", sim_policy);
  sim->add_option("--maxd", sim_maxd);
  sim->add_option("--seed", sim_seed);
  sim->add_option("--mu", sim_mu);
  sim->add_option("--pool", sim_pool);
  sim->add_option("--threads", sim_threads);

  // train
  auto* train = app.add_subcommand("train", "multi-pass performance-predictor training");
  TrainArgs train_args;
  train->add_option("--index", train_args.index_path)->required();
  train->add_option("--topics", train_args.topics_path)->required();
  train->add_option("--qrels", train_args.qrels_path)->required();
  train->add_option("--out", train_args.model_out)->required();
  train->add_option("--log", train_args.log_out);
  train->add_option("--partition-out", train_args.partition_out);
  train->add_option("--checkpoint-dir", train_args.checkpoint_dir);
  train->add_option("--stopwords", train_args.stopwords_path);
  train->add_option("--seed", train_args.seed);
  train->add_option("--passes", train_args.passes);
  train->add_option("--n", train_args.sp.n);
  train->add_option("--b", train_args.sp.b);
  train->add_option("--d", train_args.sp.d);
  train->add_option("--mu", train_args.rp.mu);
  train->add_option("--pool", train_args.rp.pool_size);
  train->add_option("--k", train_args.rp.k);
  train->add_option("--c-grid", train_args.c_grid);
  train->add_option("--m-grid", train_args.m_grid);
  train->add_option("--delta", train_args.delta);
  train->add_option("--threads", train_args.threads);

  // reform
  auto* reform = app.add_subcommand("reform", "PQR retrieval with a trained model");
  ReformArgs reform_args;
  reform->add_option("--index", reform_args.index_path)->required();
  reform->add_option("--topics", reform_args.topics_path)->required();
  reform->add_option("--model", reform_args.model_path);
  reform->add_option("--out", reform_args.out_path)->required();
  reform->add_option("--stopwords", reform_args.stopwords_path);
  reform->add_option("--scorer", reform_args.scorer);
  reform->add_option("--seed", reform_args.seed);
  reform->add_option("--n", reform_args.sp.n);
  reform->add_option("--b", reform_args.sp.b);
  reform->add_option("--d", reform_args.sp.d);
  reform->add_option("--m", reform_args.m_override);
  reform->add_option("--mu", reform_args.rp.mu);
  reform->add_option("--pool", reform_args.rp.pool_size);
  reform->add_option("--k", reform_args.rp.k);
  reform->add_option("--tag", reform_args.tag);
  reform->add_option("--trace-out", reform_args.trace_out);
  reform->add_option("--features-out", reform_args.features_out);
  reform->add_option("--threads", reform_args.threads);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a run file against qrels");
  std::string eval_run, eval_qrels, eval_out;
  std::string eval_metrics = "ndcg_cut_5,ndcg_cut_10,ndcg_cut_20,ndcg_cut_30,ndcg,map";
  eval->add_option("--run", eval_run)->required();
  eval->add_option("--qrels", eval_qrels)->required();
  eval->add_option("--metrics", eval_metrics);
  eval->add_option("--out", eval_out);

  // report
  auto* report = app.add_subcommand("report", "side-by-side comparison table for several runs");
  std::vector<std::string> report_runs;
  std::string report_qrels, report_out;
  report->add_option("--runs", report_runs)->required()->expected(-1);
  report->add_option("--qrels", report_qrels)->required();
  report->add_option("--out", report_out);

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes reversed argv
    app.parse(args);
    if (*synth) return cmd_synth(synth_dir, synth_docs, synth_topics, synth_vocab, synth_seed,
                                 synth_format);
    if (*index_cmd) return cmd_index(idx_corpus, idx_format, idx_out, idx_stopwords);
    if (*stats) return cmd_stats(stats_index, stats_out);
    if (*ql) return cmd_ql(ql_args);
    if (*rm3) return cmd_rm3(rm3_args, rm3_fb_docs, rm3_fb_terms, rm3_lambda, rm3_pool);
    if (*sim)
      return cmd_simulate(sim_index, sim_topics, sim_qrels, sim_out, sim_stopwords, sim_policy,
                          sim_maxd, sim_seed, sim_mu, sim_pool, sim_threads);
    if (*train) return cmd_train(train_args);
    if (*reform) return cmd_reform(reform_args);
    if (*eval) return cmd_eval(eval_run, eval_qrels, eval_metrics, eval_out);
    if (*report) return cmd_report(report_runs, report_qrels, report_out);
    throw UsageError("no subcommand selected");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace pqr
