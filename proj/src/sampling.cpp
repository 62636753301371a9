#include "kgeval/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace kgeval {

std::vector<std::uint32_t> srs_draw(const KnowledgeGraph& kg, std::size_t batch,
                                    const std::unordered_set<std::uint32_t>& already_drawn,
                                    Rng& rng) {
  if (batch < 1) throw std::invalid_argument("batch must be >= 1");
  const std::size_t remaining = kg.size() - already_drawn.size();
  if (batch > remaining) throw std::runtime_error("population exhausted");

  std::vector<std::uint32_t> picked;
  picked.reserve(batch);
  std::unordered_set<std::uint32_t> in_batch;
  while (picked.size() < batch) {
    const auto idx = static_cast<std::uint32_t>(rng.below(kg.size()));
    if (already_drawn.count(idx) || in_batch.count(idx)) continue;
    in_batch.insert(idx);
    picked.push_back(idx);
  }
  return picked;
}

std::vector<ClusterDraw> twcs_draw(const KnowledgeGraph& kg, std::size_t n_clusters,
                                   std::size_t m, Rng& rng) {
  if (n_clusters < 1 || m < 1) throw std::invalid_argument("n_clusters and m must be >= 1");
  if (kg.size() == 0) throw std::runtime_error("empty knowledge graph");

  std::vector<ClusterDraw> draws;
  draws.reserve(n_clusters);
  for (std::size_t k = 0; k < n_clusters; ++k) {
    // Size-proportional selection: a uniform triple rank names its cluster.
    const std::uint64_t r = rng.below(kg.size());
    const std::size_t ci = kg.cluster_containing_rank(r);
    const EntityCluster& cluster = kg.cluster(ci);

    ClusterDraw draw;
    draw.cluster = static_cast<std::uint32_t>(ci);
    const std::size_t take = std::min<std::size_t>(cluster.size(), m);
    if (take == cluster.size()) {
      draw.triples = cluster.triples;
    } else {
      // Floyd's sampling: `take` distinct positions out of cluster.size().
      std::unordered_set<std::size_t> positions;
      for (std::size_t j = cluster.size() - take; j < cluster.size(); ++j) {
        const std::size_t t = rng.below(j + 1);
        positions.insert(positions.count(t) ? j : t);
      }
      draw.triples.reserve(take);
      for (std::size_t pos : positions) draw.triples.push_back(cluster.triples[pos]);
      std::sort(draw.triples.begin(), draw.triples.end());
    }
    draws.push_back(std::move(draw));
  }
  return draws;
}

EstimateWithVariance estimate_srs(const AnnotatedSample& sample) {
  if (sample.n() == 0) throw std::runtime_error("empty sample");
  const double n = static_cast<double>(sample.n());
  const double tau = static_cast<double>(sample.tau);
  EstimateWithVariance est;
  est.mu_hat = tau / n;
  est.variance = est.mu_hat * (1.0 - est.mu_hat) / n;
  est.effective_n = n;
  est.effective_tau = tau;
  return est;
}

EstimateWithVariance estimate_twcs(const AnnotatedSample& sample) {
  if (sample.groups.empty()) throw std::runtime_error("sample has no cluster groups");
  const std::size_t n_c = sample.groups.size();
  if (n_c < 2) throw std::runtime_error("cluster variance undefined for a single group");

  double mean = 0.0;
  for (const GroupStat& g : sample.groups) mean += g.proportion();
  mean /= static_cast<double>(n_c);

  double ss = 0.0;
  for (const GroupStat& g : sample.groups) {
    const double d = g.proportion() - mean;
    ss += d * d;
  }
  EstimateWithVariance est;
  est.mu_hat = mean;
  est.variance = ss / (static_cast<double>(n_c) * static_cast<double>(n_c - 1));
  return est;
}

EstimateWithVariance design_effect_adjust(const AnnotatedSample& sample) {
  EstimateWithVariance est = estimate_twcs(sample);
  const double n = static_cast<double>(sample.n());
  const double srs_variance = est.mu_hat * (1.0 - est.mu_hat) / n;
  double deff = 1.0;
  if (srs_variance > 0.0) {
    deff = std::max(est.variance / srs_variance, kDesignEffectFloor);
  }
  est.effective_n = n / deff;
  est.effective_tau = est.mu_hat * est.effective_n;
  return est;
}

}  // namespace kgeval
