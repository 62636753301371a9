#include "kgeval/kg_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kgeval {

std::size_t KnowledgeGraph::cluster_containing_rank(std::uint64_t r) const {
  if (r >= size()) throw std::out_of_range("triple rank out of range");
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), r);
  return static_cast<std::size_t>(it - prefix_.begin());
}

bool KnowledgeGraph::fully_labeled() const {
  for (const Triple& t : triples_) {
    if (!t.labeled()) return false;
  }
  return true;
}

double KnowledgeGraph::true_accuracy() const {
  if (triples_.empty()) throw std::runtime_error("empty knowledge graph");
  std::uint64_t correct = 0;
  for (const Triple& t : triples_) {
    if (!t.labeled()) throw std::runtime_error("true_accuracy requires every triple labeled");
    correct += t.label;
  }
  return static_cast<double>(correct) / static_cast<double>(size());
}

std::string KnowledgeGraph::triple_text(std::size_t i) const {
  const Triple& t = triples_[i];
  return symbols_[t.subject] + "\t" + symbols_[t.predicate] + "\t" + symbols_[t.object];
}

void KnowledgeGraph::save_tsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const Triple& t : triples_) {
    out << symbols_[t.subject] << '\t' << symbols_[t.predicate] << '\t'
        << symbols_[t.object];
    if (t.labeled()) out << '\t' << static_cast<int>(t.label);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void KnowledgeGraph::build_prefix_sums() {
  prefix_.clear();
  prefix_.reserve(clusters_.size());
  std::uint64_t acc = 0;
  for (const EntityCluster& c : clusters_) {
    acc += c.size();
    prefix_.push_back(acc);
  }
}

void KnowledgeGraph::Builder::reserve(std::size_t n_triples) {
  triples_.reserve(n_triples);
}

std::uint32_t KnowledgeGraph::Builder::intern(std::string_view s) {
  auto it = symbol_ids_.find(std::string(s));
  if (it != symbol_ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(symbols_.size());
  symbols_.emplace_back(s);
  symbol_ids_.emplace(symbols_.back(), id);
  return id;
}

void KnowledgeGraph::Builder::add(std::string_view subject, std::string_view predicate,
                                  std::string_view object, int label) {
  if (label != -1 && label != 0 && label != 1) {
    throw std::invalid_argument("label must be 0 or 1");
  }
  Triple t;
  t.subject = intern(subject);
  t.predicate = intern(predicate);
  t.object = intern(object);
  t.label = static_cast<std::int8_t>(label);
  const auto index = static_cast<std::uint32_t>(triples_.size());
  triples_.push_back(t);

  auto it = cluster_of_subject_.find(t.subject);
  if (it == cluster_of_subject_.end()) {
    const auto ci = static_cast<std::uint32_t>(clusters_.size());
    EntityCluster cluster;
    cluster.entity = t.subject;
    cluster.triples.push_back(index);
    clusters_.push_back(std::move(cluster));
    cluster_of_subject_.emplace(t.subject, ci);
  } else {
    clusters_[it->second].triples.push_back(index);
  }
}

KnowledgeGraph KnowledgeGraph::Builder::finish() {
  if (triples_.empty()) throw std::runtime_error("empty knowledge graph");
  KnowledgeGraph kg;
  kg.symbols_ = std::move(symbols_);
  kg.triples_ = std::move(triples_);
  kg.clusters_ = std::move(clusters_);
  kg.build_prefix_sums();
  return kg;
}

KnowledgeGraph KnowledgeGraph::load_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Builder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::string_view rest(line);
    std::vector<std::string_view> fields;
    while (true) {
      const auto tab = rest.find('\t');
      if (tab == std::string_view::npos) {
        fields.push_back(rest);
        break;
      }
      fields.push_back(rest.substr(0, tab));
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() < 3 || fields.size() > 4) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 3 or 4 tab-separated fields");
    }
    int label = -1;
    if (fields.size() == 4) {
      if (fields[3] == "0") {
        label = 0;
      } else if (fields[3] == "1") {
        label = 1;
      } else {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": label field must be 0 or 1");
      }
    }
    builder.add(fields[0], fields[1], fields[2], label);
  }
  return builder.finish();
}

KnowledgeGraph KnowledgeGraph::generate_synthetic(std::size_t n_clusters,
                                                  double mean_cluster_size,
                                                  double mu, std::uint64_t seed) {
  if (n_clusters < 1) throw std::invalid_argument("n_clusters must be >= 1");
  if (!(mean_cluster_size >= 1.0)) throw std::invalid_argument("mean cluster size must be >= 1");
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must be in [0, 1]");

  Rng rng(seed);
  Builder builder;
  builder.reserve(static_cast<std::size_t>(n_clusters * mean_cluster_size));
  // Shifted geometric on {1, 2, ...} with the requested mean; degenerate at
  // mean 1.
  const double p_stop = 1.0 / mean_cluster_size;
  std::string subject, object;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    std::size_t cluster_size = 1;
    if (mean_cluster_size > 1.0) {
      // Inverse-CDF geometric draw from a single uniform.
      const double u = rng.unit();
      cluster_size = 1 + static_cast<std::size_t>(std::floor(std::log1p(-u) / std::log1p(-p_stop)));
      if (cluster_size > 100000) cluster_size = 100000;
    }
    subject = "e" + std::to_string(c);
    for (std::size_t j = 0; j < cluster_size; ++j) {
      const int label = rng.bernoulli(mu) ? 1 : 0;
      object = "o" + std::to_string(j % 64);
      builder.add(subject, "p0", object, label);
    }
  }
  return builder.finish();
}

}  // namespace kgeval
