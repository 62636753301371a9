#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgeval/kg_store.hpp"
#include "kgeval/random.hpp"

namespace kgeval {

// Second-stage draw from one selected cluster instance. The first stage is
// with replacement, so the same cluster may appear in several draws, each
// with an independent second-stage selection.
struct ClusterDraw {
  std::uint32_t cluster = 0;
  std::vector<std::uint32_t> triples;
};

// Per-cluster-instance annotation outcome.
struct GroupStat {
  std::uint32_t cluster = 0;
  std::uint32_t drawn = 0;
  std::uint32_t correct = 0;

  double proportion() const { return static_cast<double>(correct) / drawn; }
};

// Annotations accumulated across iterations of the evaluation loop.
struct AnnotatedSample {
  std::vector<std::pair<std::uint32_t, std::uint8_t>> entries;  // in draw order
  std::unordered_map<std::uint32_t, std::uint8_t> labels;       // distinct triple -> label
  std::unordered_set<std::uint32_t> entities;                   // distinct subjects
  std::uint64_t tau = 0;                                        // correct count over entries
  std::vector<GroupStat> groups;                                // cluster design only

  std::size_t n() const { return entries.size(); }
  std::size_t distinct_triples() const { return labels.size(); }
};

// Point estimate with its sampling variance and the design-effect-adjusted
// effective counts used by the credible constructions.
struct EstimateWithVariance {
  double mu_hat = 0.0;
  double variance = 0.0;
  double effective_n = 0.0;
  double effective_tau = 0.0;
};

// `batch` distinct triple indices uniform over the not-yet-drawn population.
std::vector<std::uint32_t> srs_draw(const KnowledgeGraph& kg, std::size_t batch,
                                    const std::unordered_set<std::uint32_t>& already_drawn,
                                    Rng& rng);

// First stage: `n_clusters` clusters with replacement, probability
// proportional to size. Second stage: min{cluster size, m} triples without
// replacement from each selected instance.
std::vector<ClusterDraw> twcs_draw(const KnowledgeGraph& kg, std::size_t n_clusters,
                                   std::size_t m, Rng& rng);

// Sample proportion and its variance under simple random sampling.
EstimateWithVariance estimate_srs(const AnnotatedSample& sample);

// Mean of per-cluster proportions (Hansen-Hurwitz form) and its variance;
// effective counts are left for design_effect_adjust.
EstimateWithVariance estimate_twcs(const AnnotatedSample& sample);

// Variance-ratio design effect, floored at 0.5 (and forced to 1 when the
// proportion estimate sits on a boundary); divides the raw sample size into
// the effective one.
EstimateWithVariance design_effect_adjust(const AnnotatedSample& sample);

inline constexpr double kDesignEffectFloor = 0.5;

}  // namespace kgeval
