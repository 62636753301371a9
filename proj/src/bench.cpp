#include "kgeval/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace kgeval {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd r;
  if (v.empty()) return r;
  for (double x : v) r.mean += x;
  r.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return r;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return r;
}

nlohmann::json config_json(const EvalConfig& c) {
  nlohmann::json j;
  j["alpha"] = c.alpha;
  j["epsilon"] = c.epsilon;
  j["sampling"] = c.sampling.kind == SamplingKind::srs ? "srs" : "twcs";
  if (c.sampling.kind == SamplingKind::twcs) j["m"] = c.sampling.m;
  j["method"] = method_kind_name(c.method.kind);
  nlohmann::json priors = nlohmann::json::array();
  for (const BetaParams& p : c.method.priors) priors.push_back({p.a, p.b});
  j["priors"] = priors;
  j["initial_batch"] = c.resolved_initial();
  j["step_batch"] = c.resolved_step();
  j["c1"] = c.cost_c1;
  j["c2"] = c.cost_c2;
  if (c.max_annotations) j["max_annotations"] = *c.max_annotations;
  return j;
}

}  // namespace

std::vector<double> ReplicationSummary::triples_raw() const {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const RunOutcome& r : runs) v.push_back(r.triples);
  return v;
}

std::vector<double> ReplicationSummary::cost_hours_raw() const {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const RunOutcome& r : runs) v.push_back(r.cost_hours);
  return v;
}

ReplicationSummary replicate(const KnowledgeGraph& kg, const EvalConfig& config, int reps,
                             std::uint64_t base_seed, int workers) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  config.validate();
  if (workers < 1) workers = 1;

  ReplicationSummary summary;
  summary.method = method_kind_name(config.method.kind);
  summary.sampling = config.sampling.kind == SamplingKind::srs ? "srs" : "twcs";
  summary.alpha = config.alpha;
  summary.epsilon = config.epsilon;
  summary.reps = reps;
  summary.config = config;
  summary.runs.resize(reps);

  const Annotator annotator = oracle_annotator(kg);
  std::atomic<int> next{0};
  auto work = [&]() {
    CredibleCache cache;
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) break;
      Rng rng(mix_seed(base_seed, static_cast<std::uint64_t>(r)));
      const EvalReport rep =
          run_evaluation(kg, config, annotator, rng, &cache, /*keep_trace=*/false);
      RunOutcome out;
      out.triples = static_cast<std::uint32_t>(rep.n_triples);
      out.entities = static_cast<std::uint32_t>(rep.n_entities);
      out.instances = static_cast<std::uint32_t>(rep.n_instances);
      out.cost_hours = rep.cost_hours();
      out.iterations = rep.iterations;
      out.final_width = rep.interval.width();
      out.converged = rep.converged;
      summary.runs[r] = out;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  const MeanStd tr = mean_std(summary.triples_raw());
  const MeanStd ch = mean_std(summary.cost_hours_raw());
  summary.triples_mean = tr.mean;
  summary.triples_std = tr.std;
  summary.cost_h_mean = ch.mean;
  summary.cost_h_std = ch.std;
  double entities = 0.0, conv = 0.0;
  for (const RunOutcome& r : summary.runs) {
    entities += r.entities;
    conv += r.converged ? 1.0 : 0.0;
  }
  summary.entities_mean = entities / reps;
  summary.converged_frac = conv / reps;
  return summary;
}

TTestResult t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t_test needs >= 2 values per side");
  const MeanStd ma = mean_std(a);
  const MeanStd mb = mean_std(b);
  const double va = ma.std * ma.std / static_cast<double>(a.size());
  const double vb = mb.std * mb.std / static_cast<double>(b.size());
  TTestResult r;
  if (va + vb == 0.0) {
    if (ma.mean == mb.mean) throw std::runtime_error("degenerate t test: zero variance, equal means");
    r.t = ma.mean > mb.mean ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.df = static_cast<double>(a.size() + b.size() - 2);
    return r;
  }
  r.t = (ma.mean - mb.mean) / std::sqrt(va + vb);
  // Welch-Satterthwaite degrees of freedom.
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  r.p = 2.0 * student_t_sf(std::fabs(r.t), r.df);
  return r;
}

std::vector<double> expected_width(const BetaParams& prior, int n, double alpha,
                                   const std::vector<double>& mu_grid, Method method) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (method != Method::et && method != Method::hpd) {
    throw std::invalid_argument("expected_width supports et or hpd");
  }
  // Interval widths depend on mu only through tau, so solve each posterior
  // once and mix with the binomial weights per grid point.
  std::vector<double> widths(n + 1);
  for (int tau = 0; tau <= n; ++tau) {
    const BetaParams post = posterior_update(prior, tau, n);
    const IntervalEstimate e = method == Method::et ? et_cri(post, alpha) : hpd_cri(post, alpha);
    widths[tau] = e.width();
  }
  std::vector<double> out;
  out.reserve(mu_grid.size());
  for (double mu : mu_grid) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("grid mu must be in [0, 1]");
    double acc = 0.0;
    for (int tau = 0; tau <= n; ++tau) acc += binomial_pmf(tau, n, mu) * widths[tau];
    out.push_back(acc);
  }
  return out;
}

namespace {

nlohmann::json summary_json(const ReplicationSummary& s, bool include_raw) {
  nlohmann::json j;
  j["method"] = s.method;
  j["dataset"] = s.dataset;
  j["sampling"] = s.sampling;
  j["alpha"] = s.alpha;
  j["epsilon"] = s.epsilon;
  j["R"] = s.reps;
  j["triples_mean"] = s.triples_mean;
  j["triples_std"] = s.triples_std;
  j["cost_h_mean"] = s.cost_h_mean;
  j["cost_h_std"] = s.cost_h_std;
  j["entities_mean"] = s.entities_mean;
  j["converged_frac"] = s.converged_frac;
  j["config"] = config_json(s.config);
  if (include_raw) {
    j["triples_raw"] = s.triples_raw();
    j["cost_h_raw"] = s.cost_hours_raw();
  }
  return j;
}

}  // namespace

void emit_report(const std::vector<ReplicationSummary>& summaries, ReportFormat format,
                 const std::string& path, bool include_raw) {
  if (summaries.empty()) throw std::invalid_argument("no summaries to report");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (format == ReportFormat::csv) {
    out << "method,dataset,sampling,alpha,epsilon,R,triples_mean,triples_std,"
           "cost_h_mean,cost_h_std,entities_mean,converged_frac\n";
    out.precision(10);
    for (const ReplicationSummary& s : summaries) {
      out << s.method << ',' << s.dataset << ',' << s.sampling << ',' << s.alpha << ','
          << s.epsilon << ',' << s.reps << ',' << s.triples_mean << ',' << s.triples_std
          << ',' << s.cost_h_mean << ',' << s.cost_h_std << ',' << s.entities_mean << ','
          << s.converged_frac << '\n';
    }
  } else {
    nlohmann::json j = nlohmann::json::array();
    for (const ReplicationSummary& s : summaries) j.push_back(summary_json(s, include_raw));
    out << j.dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ReplicationSummary> parse_json_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  std::vector<ReplicationSummary> out;
  for (const nlohmann::json& e : j) {
    ReplicationSummary s;
    s.method = e.at("method").get<std::string>();
    s.dataset = e.at("dataset").get<std::string>();
    s.sampling = e.at("sampling").get<std::string>();
    s.alpha = e.at("alpha").get<double>();
    s.epsilon = e.at("epsilon").get<double>();
    s.reps = e.at("R").get<int>();
    s.triples_mean = e.at("triples_mean").get<double>();
    s.triples_std = e.at("triples_std").get<double>();
    s.cost_h_mean = e.at("cost_h_mean").get<double>();
    s.cost_h_std = e.at("cost_h_std").get<double>();
    s.entities_mean = e.at("entities_mean").get<double>();
    s.converged_frac = e.at("converged_frac").get<double>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace kgeval
