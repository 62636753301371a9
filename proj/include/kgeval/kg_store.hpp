#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgeval/random.hpp"

namespace kgeval {

// One (subject, predicate, object) fact. Symbols are interned; `label` is
// the correctness bit, -1 while unknown.
struct Triple {
  std::uint32_t subject = 0;
  std::uint32_t predicate = 0;
  std::uint32_t object = 0;
  std::int8_t label = -1;

  bool labeled() const { return label >= 0; }
};

// All triples sharing one subject entity; the first-stage unit of cluster
// sampling.
struct EntityCluster {
  std::uint32_t entity = 0;
  std::vector<std::uint32_t> triples;  // indices into KnowledgeGraph

  std::size_t size() const { return triples.size(); }
};

// Immutable after construction; concurrent readers need no locking.
class KnowledgeGraph {
 public:
  std::size_t size() const { return triples_.size(); }
  std::size_t cluster_count() const { return clusters_.size(); }
  const Triple& triple(std::size_t i) const { return triples_[i]; }
  const EntityCluster& cluster(std::size_t i) const { return clusters_[i]; }
  const std::string& symbol(std::uint32_t id) const { return symbols_[id]; }
  const std::vector<std::uint64_t>& cluster_prefix_sums() const { return prefix_; }

  // Index of the cluster holding global triple rank r (prefix-sum search).
  std::size_t cluster_containing_rank(std::uint64_t r) const;

  bool fully_labeled() const;

  // Proportion of correct triples; requires every triple labeled.
  double true_accuracy() const;

  std::string triple_text(std::size_t i) const;

  void save_tsv(const std::string& path) const;

  // Parses `subject<TAB>predicate<TAB>object[<TAB>label]` rows; `#` lines
  // are comments. Clusters are grouped by subject in order of first
  // appearance.
  static KnowledgeGraph load_tsv(const std::string& path);

  // Synthetic population: cluster sizes are shifted-geometric with the given
  // mean, each triple is correct with probability mu, all reproducible from
  // the seed.
  static KnowledgeGraph generate_synthetic(std::size_t n_clusters,
                                           double mean_cluster_size, double mu,
                                           std::uint64_t seed);

  class Builder {
   public:
    void add(std::string_view subject, std::string_view predicate,
             std::string_view object, int label = -1);
    void reserve(std::size_t n_triples);
    KnowledgeGraph finish();

   private:
    std::uint32_t intern(std::string_view s);
    std::vector<std::string> symbols_;
    std::vector<Triple> triples_;
    std::vector<EntityCluster> clusters_;
    std::unordered_map<std::string, std::uint32_t> symbol_ids_;
    std::unordered_map<std::uint32_t, std::uint32_t> cluster_of_subject_;
  };

 private:
  void build_prefix_sums();

  std::vector<std::string> symbols_;
  std::vector<Triple> triples_;
  std::vector<EntityCluster> clusters_;
  std::vector<std::uint64_t> prefix_;  // cumulative cluster sizes, last == size()
};

}  // namespace kgeval
