#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kgeval/kg_store.hpp"

namespace kgeval::testing {

// Deterministic stand-in populations mirroring the size and accuracy profile
// of the common KG-accuracy benchmark datasets. Cluster sizes follow either
// an explicit histogram or a shifted-geometric law; correctness labels hit
// the exact global count, with `label_mixing` shaping how labels spread over
// clusters:
//   0   independent placement,
//   > 0 that fraction of clusters carries a near-proportional label split,
//   < 0 that fraction of clusters is internally homogeneous.
struct StandinSpec {
  std::string name;
  std::uint32_t clusters = 0;
  std::uint64_t facts = 0;
  std::uint64_t correct = 0;
  double geometric_mean = 0.0;  // used when histogram is empty
  std::vector<std::pair<std::uint32_t, std::uint32_t>> histogram;  // (size, count)
  double label_mixing = 0.0;
  std::uint64_t seed = 0;
};

KnowledgeGraph make_standin(const StandinSpec& spec);

// Small curated sample of a curated encyclopedic KG: tiny clusters, almost
// every fact correct.
StandinSpec yago_like();
// Automatically extracted sports facts: small clusters, ~0.91 accurate.
StandinSpec nell_like();
// Broad-coverage encyclopedic extraction: mid-size clusters, ~0.85 accurate.
StandinSpec dbpedia_like();
// Fact-validation benchmark whose negatives are corrupted copies of
// positives, so clusters mix correct and incorrect facts almost evenly.
StandinSpec factbench_like();

KnowledgeGraph make_by_name(const std::string& name);

}  // namespace kgeval::testing
