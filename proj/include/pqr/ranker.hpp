#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pqr/features.hpp"

namespace pqr {

struct TrainingInstance {
  std::string session_id;  // topic id + pass id; pairs never cross sessions
  FeatureVector fv;
  double true_metric = 0;      // NDCG@30 of the candidate
  double centered_metric = 0;  // true_metric - NDCG@30 of the initial query
};

struct RankPair {
  FeatureVector better;
  FeatureVector worse;
  std::string session_id;
};

/// All within-session ordered pairs whose true-metric gap is >= delta.
std::vector<RankPair> make_pairs(std::span<const TrainingInstance> instances, double delta);

struct ModelManifest {
  double C = 0;
  uint64_t seed = 0;
  int pass = 0;
  int subset = 0;
  int merge_count = 0;   // m selected on v0
  double v1_score = 0;
};

/// Linear pairwise ranking model with per-feature z-score normalization.
/// Zero-variance features get std 1 and their weight pinned to 0.
struct LinearRankModel {
  std::vector<double> weights;
  std::vector<double> feature_means;
  std::vector<double> feature_stds;
  int schema_version = FeatureSchema::kVersion;
  ModelManifest manifest;

  double predict(const FeatureVector& fv) const;

  bool operator==(const LinearRankModel&) const = default;
};

/// Minimizes 0.5*|w|^2 + C * sum hinge(1 - w.(x+ - x-)) by seeded stochastic
/// subgradient descent with a fixed epoch count and decaying step size.
/// Deterministic for fixed inputs and seed.
LinearRankModel train_pairwise(std::span<const RankPair> pairs, double C, uint64_t seed);

/// Fraction of pairs ranked correctly (strictly positive margin).
double pair_accuracy(const LinearRankModel& model, std::span<const RankPair> pairs);

/// Trains one model per C and returns the one whose validation score is
/// highest; ties go to the smaller C.
LinearRankModel sweep_C(std::span<const RankPair> pairs, std::span<const double> C_grid,
                        uint64_t seed,
                        const std::function<double(const LinearRankModel&)>& validate);

void save_model(const LinearRankModel& model, const std::string& path);
LinearRankModel load_model(const std::string& path);

}  // namespace pqr
