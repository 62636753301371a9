#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgeval/intervals.hpp"
#include "kgeval/kg_store.hpp"
#include "kgeval/sampling.hpp"

namespace kgeval {

enum class SamplingKind { srs, twcs };

struct SamplingScheme {
  SamplingKind kind = SamplingKind::srs;
  int m = 3;  // second-stage cap under cluster sampling

  static SamplingScheme srs() { return {SamplingKind::srs, 0}; }
  static SamplingScheme twcs(int m) { return {SamplingKind::twcs, m}; }
};

enum class MethodKind { wald, wilson, et, hpd, ahpd };

const char* method_kind_name(MethodKind m);

struct IntervalMethod {
  MethodKind kind = MethodKind::ahpd;
  std::vector<BetaParams> priors;  // one for et/hpd, one or more for ahpd

  static IntervalMethod wald() { return {MethodKind::wald, {}}; }
  static IntervalMethod wilson() { return {MethodKind::wilson, {}}; }
  static IntervalMethod et(BetaParams prior) { return {MethodKind::et, {prior}}; }
  static IntervalMethod hpd(BetaParams prior) { return {MethodKind::hpd, {prior}}; }
  static IntervalMethod ahpd(std::vector<BetaParams> priors) {
    return {MethodKind::ahpd, std::move(priors)};
  }
  // Kerman, Jeffreys and Uniform priors competing.
  static IntervalMethod ahpd_default() {
    return ahpd({BetaParams::kerman(), BetaParams::jeffreys(), BetaParams::uniform()});
  }
};

struct EvalConfig {
  double alpha = 0.05;
  double epsilon = 0.05;  // margin-of-error bound; halt when MoE <= epsilon
  SamplingScheme sampling;
  IntervalMethod method = IntervalMethod::ahpd_default();
  int initial_batch = 0;  // triples (srs) or clusters (twcs); 0 = design default
  int step_batch = 0;     // 0 = design default
  double cost_c1 = 45.0;  // seconds per entity identification
  double cost_c2 = 25.0;  // seconds per fact verification
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_annotations;

  int resolved_initial() const;
  int resolved_step() const;
  void validate() const;  // throws std::invalid_argument
};

// Annotation provider: one 0/1 label per requested triple index, in order.
using Annotator = std::function<std::vector<std::uint8_t>(const std::vector<std::uint32_t>&)>;

// Thrown by annotators whose input channel closes mid-batch; the evaluation
// run turns it into a non-converged report.
struct AnnotatorClosed : std::runtime_error {
  AnnotatorClosed() : std::runtime_error("annotation channel closed") {}
};

// Replays stored ground-truth labels. Throws at construction if any triple
// is unlabeled.
Annotator oracle_annotator(const KnowledgeGraph& kg);

// Prompts per triple on `out`, reads 1/0 from `in`, re-prompting on other
// input.
Annotator interactive_annotator(const KnowledgeGraph& kg, std::istream& in,
                                std::ostream& out);

// Consumes one pre-recorded 0/1 label per line.
Annotator file_annotator(std::istream& in);

enum class StopReason { converged, population_exhausted, budget_exhausted, annotator_closed };

const char* stop_reason_name(StopReason r);

struct IterationRecord {
  std::uint64_t n = 0;       // annotated instances so far
  double tau = 0.0;
  double mu_hat = 0.0;
  std::vector<IntervalEstimate> candidates;
  int selected = 0;
};

struct EvalReport {
  double mu_hat = std::numeric_limits<double>::quiet_NaN();
  IntervalEstimate interval;
  std::uint64_t n_triples = 0;    // distinct annotated triples
  std::uint64_t n_entities = 0;   // distinct subjects
  std::uint64_t n_instances = 0;  // annotated instances incl. cluster repeats
  double cost_seconds = 0.0;
  int iterations = 0;
  bool converged = false;
  StopReason reason = StopReason::converged;
  std::vector<IterationRecord> trace;

  double cost_hours() const { return cost_seconds / 3600.0; }
};

// Manual-effort model: entity identification plus per-fact verification.
double annotation_cost(std::uint64_t n_entities, std::uint64_t n_triples, double c1,
                       double c2);

// Memo for credible-interval solves keyed by the exact posterior; distinct
// evaluation runs over the same population revisit the same posteriors
// constantly. One cache per thread; not internally synchronized.
class CredibleCache {
 public:
  const IntervalEstimate* find(Method method, const BetaParams& post, double alpha) const;
  void insert(Method method, const BetaParams& post, double alpha, const IntervalEstimate& e);
  std::size_t size() const { return map_.size(); }

 private:
  struct Key {
    double a, b, alpha;
    Method method;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  std::unordered_map<Key, IntervalEstimate, KeyHash> map_;
};

// One full sample-annotate-estimate loop: draws batches under the configured
// design, obtains labels, rebuilds the configured interval(s) and halts once
// the selected margin of error drops to epsilon. Non-convergence (exhausted
// population, exhausted budget, closed annotator) is reported in the result,
// not thrown.
EvalReport run_evaluation(const KnowledgeGraph& kg, const EvalConfig& config,
                          const Annotator& annotator, Rng& rng,
                          CredibleCache* cache = nullptr, bool keep_trace = true);

}  // namespace kgeval
