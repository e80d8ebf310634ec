#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "pqr/index.hpp"
#include "pqr/query.hpp"
#include "pqr/result_list.hpp"
#include "pqr/retrieval.hpp"

namespace pqr {

/// Fixed, versioned ordering of the performance-prediction signals. Models
/// and vectors must carry the same schema version to interoperate.
struct FeatureSchema {
  static constexpr int kVersion = 1;
  static constexpr int kSize = 30;
  static const std::array<std::string, kSize>& names();
};

struct FeatureVector {
  std::array<double, FeatureSchema::kSize> values{};
  int schema_version = FeatureSchema::kVersion;
};

struct QuerySignals {
  double mean_idf = 0;
  double max_idf = 0;
  double min_idf = 0;
  double sc = 0;   // simplified clarity
  double qs = 0;   // query scope
  double len = 0;  // distinct term count
};

/// Pre-retrieval signals of a term set. Also used for the deleted / preserved
/// / introduced term groups of the drift block, where the set may be empty
/// (all-zero signals) or contain out-of-vocabulary terms (capped IDF, floored
/// collection probability).
QuerySignals query_signals(const Index& index, std::span<const std::string> terms);

struct ResultSignals {
  double clarity_b = 0;        // Bhattacharyya between feedback LM and corpus LM
  double score_autocorr = 0;   // agreement between scores and neighbor-averaged scores
};

ResultSignals result_signals(const Index& index, const ResultList& results,
                             DocLmCache* cache = nullptr);

struct DriftSignals {
  double tau_ap = 0;
  double lm_bhatta = 0;
  QuerySignals deleted;
  QuerySignals preserved;
  QuerySignals introduced;
};

DriftSignals drift_signals(const Index& index, const Query& q_ref, const ResultList& r_ref,
                           const Query& q_t, const ResultList& r_t, DocLmCache* cache = nullptr);

/// Full 30-signal vector for candidate q_t, referenced against the initial
/// query and its parent in the reformulation graph.
FeatureVector assemble(const Index& index, const Query& q0, const ResultList& r0,
                       const Query& q_parent, const ResultList& r_parent, const Query& q_t,
                       const ResultList& r_t, DocLmCache* cache = nullptr);

}  // namespace pqr
