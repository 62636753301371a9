#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "kgeval/kg_store.hpp"
#include "kgeval/random.hpp"

using namespace kgeval;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("load_tsv groups triples by subject in first-appearance order") {
  TempFile f("kgeval_basic.tsv");
  write_file(f.path, "e1\tp\to1\t1\ne1\tp\to2\t0\ne2\tp\te1\t1\n");
  const KnowledgeGraph kg = KnowledgeGraph::load_tsv(f.path);
  CHECK(kg.size() == 3);
  CHECK(kg.cluster_count() == 2);
  CHECK(kg.cluster(0).size() == 2);
  CHECK(kg.cluster(1).size() == 1);
  CHECK(kg.symbol(kg.cluster(0).entity) == "e1");
  CHECK(kg.symbol(kg.cluster(1).entity) == "e2");
  CHECK(kg.true_accuracy() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("load_tsv skips comments and accepts unlabeled rows") {
  TempFile f("kgeval_comments.tsv");
  write_file(f.path, "# header comment\ne1\tp\to1\n\ne2\tp\to2\t1\n");
  const KnowledgeGraph kg = KnowledgeGraph::load_tsv(f.path);
  CHECK(kg.size() == 2);
  CHECK_FALSE(kg.triple(0).labeled());
  CHECK(kg.triple(1).label == 1);
  CHECK_FALSE(kg.fully_labeled());
  CHECK_THROWS_WITH_AS(kg.true_accuracy(), doctest::Contains("labeled"), std::runtime_error);
}

TEST_CASE("load_tsv rejects malformed rows with the line number") {
  TempFile f("kgeval_bad.tsv");
  write_file(f.path, "e1\tp\to1\t1\ne2\tp\n");
  CHECK_THROWS_WITH_AS(KnowledgeGraph::load_tsv(f.path), doctest::Contains(":2"),
                       std::runtime_error);

  write_file(f.path, "e1\tp\to1\t2\n");
  CHECK_THROWS_WITH_AS(KnowledgeGraph::load_tsv(f.path), doctest::Contains("label"),
                       std::runtime_error);
}

TEST_CASE("empty input is rejected") {
  TempFile f("kgeval_empty.tsv");
  write_file(f.path, "# nothing but comments\n");
  CHECK_THROWS_WITH_AS(KnowledgeGraph::load_tsv(f.path), doctest::Contains("empty"),
                       std::runtime_error);
}

TEST_CASE("save and reload round-trips the graph") {
  const KnowledgeGraph kg = KnowledgeGraph::generate_synthetic(50, 2.5, 0.7, 42);
  TempFile f("kgeval_roundtrip.tsv");
  kg.save_tsv(f.path);
  const KnowledgeGraph back = KnowledgeGraph::load_tsv(f.path);
  REQUIRE(back.size() == kg.size());
  REQUIRE(back.cluster_count() == kg.cluster_count());
  for (std::size_t i = 0; i < kg.size(); ++i) {
    CHECK(back.triple_text(i) == kg.triple_text(i));
    CHECK(back.triple(i).label == kg.triple(i).label);
  }
}

TEST_CASE("generate_synthetic: degenerate singletons") {
  const KnowledgeGraph kg = KnowledgeGraph::generate_synthetic(10, 1.0, 1.0, 7);
  CHECK(kg.size() == 10);
  CHECK(kg.cluster_count() == 10);
  CHECK(kg.true_accuracy() == 1.0);
}

TEST_CASE("generate_synthetic is seed-deterministic") {
  const KnowledgeGraph a = KnowledgeGraph::generate_synthetic(200, 3.0, 0.54, 99);
  const KnowledgeGraph b = KnowledgeGraph::generate_synthetic(200, 3.0, 0.54, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.triple(i).label == b.triple(i).label);
    CHECK(a.triple_text(i) == b.triple_text(i));
  }
  const KnowledgeGraph c = KnowledgeGraph::generate_synthetic(200, 3.0, 0.54, 100);
  bool any_difference = c.size() != a.size();
  for (std::size_t i = 0; !any_difference && i < std::min(a.size(), c.size()); ++i) {
    any_difference = a.triple(i).label != c.triple(i).label;
  }
  CHECK(any_difference);
}

TEST_CASE("generate_synthetic realized accuracy concentrates around mu") {
  // 3000 labels per graph: binomial standard error sqrt(mu(1-mu)/M).
  const double mu = 0.54;
  int within = 0;
  const int trials = 120;
  for (int s = 0; s < trials; ++s) {
    const KnowledgeGraph kg = KnowledgeGraph::generate_synthetic(1000, 3.0, mu, 1000 + s);
    const double se = std::sqrt(mu * (1 - mu) / static_cast<double>(kg.size()));
    if (std::fabs(kg.true_accuracy() - mu) <= 4.0 * se) ++within;
  }
  CHECK(within >= static_cast<int>(trials * 0.99));
}

TEST_CASE("generate_synthetic mean cluster size tracks the request") {
  const KnowledgeGraph kg = KnowledgeGraph::generate_synthetic(20000, 20.28, 0.9, 5);
  const double avg = static_cast<double>(kg.size()) / kg.cluster_count();
  CHECK(avg == doctest::Approx(20.28).epsilon(0.02));
}

TEST_CASE("prefix sums locate the cluster of any triple rank") {
  const KnowledgeGraph kg = KnowledgeGraph::generate_synthetic(300, 4.0, 0.5, 21);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t r = rng.below(kg.size());
    const std::size_t ci = kg.cluster_containing_rank(r);
    const auto& prefix = kg.cluster_prefix_sums();
    const std::uint64_t lo = ci == 0 ? 0 : prefix[ci - 1];
    CHECK(r >= lo);
    CHECK(r < prefix[ci]);
    // Every referenced triple shares the cluster's subject.
    const auto& cluster = kg.cluster(ci);
    CHECK(kg.triple(cluster.triples[r - lo]).subject == cluster.entity);
  }
  CHECK(kg.cluster_prefix_sums().back() == kg.size());
}
