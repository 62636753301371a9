#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgeval/evaluator.hpp"

namespace kgeval {

// Outcome of one replication run, kept raw so significance tests can be run
// downstream.
struct RunOutcome {
  std::uint32_t triples = 0;
  std::uint32_t entities = 0;
  std::uint32_t instances = 0;
  double cost_hours = 0.0;
  int iterations = 0;
  double final_width = 1.0;
  bool converged = false;
};

struct ReplicationSummary {
  std::string method;
  std::string dataset;
  std::string sampling;
  double alpha = 0.05;
  double epsilon = 0.05;
  int reps = 0;
  double triples_mean = 0.0, triples_std = 0.0;
  double cost_h_mean = 0.0, cost_h_std = 0.0;
  double entities_mean = 0.0;
  double converged_frac = 0.0;
  std::vector<RunOutcome> runs;
  EvalConfig config;  // echoed into JSON reports

  std::vector<double> triples_raw() const;
  std::vector<double> cost_hours_raw() const;
};

// Runs the evaluation `reps` times with per-run seeds derived from
// (base_seed, run index); the aggregate is identical for any worker count.
ReplicationSummary replicate(const KnowledgeGraph& kg, const EvalConfig& config, int reps,
                             std::uint64_t base_seed, int workers = 1);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

// Welch's unequal-variance two-sample t test, two-sided p value.
TTestResult t_test(const std::vector<double>& a, const std::vector<double>& b);

// For each mu in the grid, the exact expectation over annotation outcomes of
// the credible-interval width after n observations:
//   sum_tau Bin(tau; n, mu) * width(interval(prior + data, alpha)).
std::vector<double> expected_width(const BetaParams& prior, int n, double alpha,
                                   const std::vector<double>& mu_grid, Method method);

enum class ReportFormat { csv, json };

// Tabulates summaries (method x dataset x sampling). CSV columns are fixed:
// method,dataset,sampling,alpha,epsilon,R,triples_mean,triples_std,
// cost_h_mean,cost_h_std,entities_mean,converged_frac. JSON mirrors them and
// embeds the config echo plus, when `include_raw`, the per-run vectors.
void emit_report(const std::vector<ReplicationSummary>& summaries, ReportFormat format,
                 const std::string& path, bool include_raw = false);

std::vector<ReplicationSummary> parse_json_report(const std::string& path);

}  // namespace kgeval
