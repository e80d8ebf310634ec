#include "pqr/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "pqr/errors.hpp"
#include "pqr/rng.hpp"
#include "pqr/util.hpp"

namespace pqr {

namespace {
constexpr int kEpochs = 60;
constexpr int kFeat = FeatureSchema::kSize;
}  // namespace

std::vector<RankPair> make_pairs(std::span<const TrainingInstance> instances, double delta) {
  // Group by session, preserving a deterministic session order.
  std::map<std::string, std::vector<const TrainingInstance*>> sessions;
  for (const auto& inst : instances) sessions[inst.session_id].push_back(&inst);

  std::vector<RankPair> pairs;
  for (const auto& [sid, members] : sessions) {
    for (size_t i = 0; i < members.size(); ++i) {
      for (size_t j = i + 1; j < members.size(); ++j) {
        double gap = members[i]->true_metric - members[j]->true_metric;
        if (std::abs(gap) < delta) continue;
        const TrainingInstance* hi = gap > 0 ? members[i] : members[j];
        const TrainingInstance* lo = gap > 0 ? members[j] : members[i];
        pairs.push_back({hi->fv, lo->fv, sid});
      }
    }
  }
  return pairs;
}

double LinearRankModel::predict(const FeatureVector& fv) const {
  if (fv.schema_version != schema_version)
    throw DataError("feature vector schema version does not match model");
  double s = 0;
  for (int j = 0; j < kFeat; ++j)
    s += weights[j] * (fv.values[j] - feature_means[j]) / feature_stds[j];
  return s;
}

LinearRankModel train_pairwise(std::span<const RankPair> pairs, double C, uint64_t seed) {
  if (pairs.empty()) throw DataError("cannot train from an empty pair set");
  if (!(C > 0)) throw UsageError("C must be > 0");

  LinearRankModel model;
  model.weights.assign(kFeat, 0.0);
  model.feature_means.assign(kFeat, 0.0);
  model.feature_stds.assign(kFeat, 1.0);
  model.manifest.C = C;
  model.manifest.seed = seed;

  // Normalization statistics over every vector occurrence in the pair set.
  double n = static_cast<double>(pairs.size() * 2);
  for (const auto& p : pairs)
    for (int j = 0; j < kFeat; ++j)
      model.feature_means[j] += p.better.values[j] + p.worse.values[j];
  for (int j = 0; j < kFeat; ++j) model.feature_means[j] /= n;
  std::vector<double> var(kFeat, 0.0);
  for (const auto& p : pairs)
    for (int j = 0; j < kFeat; ++j) {
      double a = p.better.values[j] - model.feature_means[j];
      double b = p.worse.values[j] - model.feature_means[j];
      var[j] += a * a + b * b;
    }
  std::vector<bool> pinned(kFeat, false);
  for (int j = 0; j < kFeat; ++j) {
    double sd = std::sqrt(var[j] / n);
    if (sd > 1e-12) {
      model.feature_stds[j] = sd;
    } else {
      model.feature_stds[j] = 1.0;
      pinned[j] = true;
    }
  }

  // Precompute normalized pair differences.
  std::vector<std::array<double, kFeat>> diffs(pairs.size());
  for (size_t p = 0; p < pairs.size(); ++p)
    for (int j = 0; j < kFeat; ++j) {
      if (pinned[j]) {
        diffs[p][j] = 0;
        continue;
      }
      diffs[p][j] =
          (pairs[p].better.values[j] - pairs[p].worse.values[j]) / model.feature_stds[j];
    }

  // Pegasos-style updates for lambda = 1 / (C * P): the stochastic objective
  // (lambda/2)|w|^2 + mean hinge matches the stated objective up to scale.
  double lambda = 1.0 / (C * static_cast<double>(pairs.size()));
  std::vector<uint32_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::vector<double>& w = model.weights;
  uint64_t t = 0;
  for (int epoch = 0; epoch < kEpochs; ++epoch) {
    rng.shuffle(order);
    for (uint32_t pi : order) {
      ++t;
      double eta = 1.0 / (lambda * static_cast<double>(t));
      const auto& d = diffs[pi];
      double margin = 0;
      for (int j = 0; j < kFeat; ++j) margin += w[j] * d[j];
      double keep = 1.0 - eta * lambda;
      if (margin < 1.0) {
        for (int j = 0; j < kFeat; ++j) w[j] = keep * w[j] + eta * d[j];
      } else {
        for (int j = 0; j < kFeat; ++j) w[j] *= keep;
      }
    }
  }
  for (int j = 0; j < kFeat; ++j)
    if (pinned[j]) w[j] = 0;
  return model;
}

double pair_accuracy(const LinearRankModel& model, std::span<const RankPair> pairs) {
  if (pairs.empty()) return 0;
  size_t good = 0;
  for (const auto& p : pairs)
    if (model.predict(p.better) > model.predict(p.worse)) ++good;
  return static_cast<double>(good) / static_cast<double>(pairs.size());
}

LinearRankModel sweep_C(std::span<const RankPair> pairs, std::span<const double> C_grid,
                        uint64_t seed,
                        const std::function<double(const LinearRankModel&)>& validate) {
  if (C_grid.empty()) throw UsageError("C grid must not be empty");
  std::vector<double> grid(C_grid.begin(), C_grid.end());
  std::sort(grid.begin(), grid.end());

  LinearRankModel best;
  double best_score = 0;
  bool have_best = false;
  for (double C : grid) {
    LinearRankModel m = train_pairwise(pairs, C, seed);
    double score = validate(m);
    if (!have_best || score > best_score) {
      best = std::move(m);
      best_score = score;
      have_best = true;
    }
  }
  return best;
}

namespace {
constexpr char kModelMagic[] = "PQRMODEL 1";
}

void save_model(const LinearRankModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << kModelMagic << '\n';
  out << "schema_version " << model.schema_version << '\n';
  out << "features " << kFeat << '\n';
  const auto& names = FeatureSchema::names();
  for (int j = 0; j < kFeat; ++j)
    out << names[j] << ' ' << fmt_full(model.weights[j]) << ' ' << fmt_full(model.feature_means[j])
        << ' ' << fmt_full(model.feature_stds[j]) << '\n';
  const ModelManifest& m = model.manifest;
  out << "manifest C=" << fmt_full(m.C) << " seed=" << m.seed << " pass=" << m.pass
      << " subset=" << m.subset << " m=" << m.merge_count << " v1=" << fmt_full(m.v1_score)
      << '\n';
  if (!out) throw DataError("short write on model file: " + path);
}

LinearRankModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw DataError(path + ": truncated model file (" + what + ")");
    return std::string_view(line);
  };

  if (next_line("magic") != kModelMagic) throw DataError(path + ": not a PQRMODEL 1 file");

  LinearRankModel model;
  {
    auto f = split_ws(next_line("schema_version"));
    int64_t v = 0;
    if (f.size() != 2 || f[0] != "schema_version" || !parse_i64(f[1], v))
      throw DataError(path + ": malformed schema_version line");
    if (v != FeatureSchema::kVersion)
      throw DataError(path + ": model schema version " + std::to_string(v) +
                      " does not match this build (" + std::to_string(FeatureSchema::kVersion) +
                      ")");
    model.schema_version = static_cast<int>(v);
  }
  {
    auto f = split_ws(next_line("features"));
    int64_t count = 0;
    if (f.size() != 2 || f[0] != "features" || !parse_i64(f[1], count) || count != kFeat)
      throw DataError(path + ": model feature count does not match schema");
  }

  const auto& names = FeatureSchema::names();
  model.weights.resize(kFeat);
  model.feature_means.resize(kFeat);
  model.feature_stds.resize(kFeat);
  for (int j = 0; j < kFeat; ++j) {
    auto f = split_ws(next_line("feature row"));
    if (f.size() != 4 || f[0] != names[j])
      throw DataError(path + ": feature row " + std::to_string(j) + " malformed or out of order");
    if (!parse_double(f[1], model.weights[j]) || !parse_double(f[2], model.feature_means[j]) ||
        !parse_double(f[3], model.feature_stds[j]))
      throw DataError(path + ": feature row " + std::to_string(j) + " has unparsable numbers");
    if (!(model.feature_stds[j] > 0))
      throw DataError(path + ": feature row " + std::to_string(j) + " has non-positive std");
  }

  {
    auto f = split_ws(next_line("manifest"));
    if (f.empty() || f[0] != "manifest") throw DataError(path + ": missing manifest line");
    for (size_t i = 1; i < f.size(); ++i) {
      auto kv = f[i];
      size_t eq = kv.find('=');
      if (eq == std::string_view::npos) throw DataError(path + ": malformed manifest entry");
      auto key = kv.substr(0, eq);
      auto val = kv.substr(eq + 1);
      int64_t iv = 0;
      ModelManifest& m = model.manifest;
      if (key == "C" && parse_double(val, m.C)) continue;
      if (key == "seed" && parse_u64(val, m.seed)) continue;
      if (key == "pass" && parse_i64(val, iv)) {
        m.pass = static_cast<int>(iv);
        continue;
      }
      if (key == "subset" && parse_i64(val, iv)) {
        m.subset = static_cast<int>(iv);
        continue;
      }
      if (key == "m" && parse_i64(val, iv)) {
        m.merge_count = static_cast<int>(iv);
        continue;
      }
      if (key == "v1" && parse_double(val, m.v1_score)) continue;
      throw DataError(path + ": unknown or unparsable manifest entry: " + std::string(kv));
    }
  }
  return model;
}

}  // namespace pqr
