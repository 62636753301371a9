// kgeval: estimate knowledge-graph accuracy from small annotated samples.
//
// Subcommands:
//   generate     write a synthetic labeled KG as TSV
//   evaluate     run one sample-annotate-estimate loop on a dataset
//   bench        replicate evaluations and tabulate cost statistics
//   prior-width  expected credible-interval widths across the accuracy range

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgeval/bench.hpp"
#include "kgeval/evaluator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

using namespace kgeval;

std::string default_out_dir() {
  const char* env = std::getenv("KGEVAL_OUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

std::string resolve_out(const std::string& path, const std::string& fallback_name) {
  if (!path.empty()) return path;
  return (std::filesystem::path(default_out_dir()) / fallback_name).string();
}

BetaParams parse_prior(const std::string& s) {
  if (s == "kerman") return BetaParams::kerman();
  if (s == "jeffreys") return BetaParams::jeffreys();
  if (s == "uniform") return BetaParams::uniform();
  const auto colon = s.find(':');
  if (colon != std::string::npos) {
    try {
      const double a = std::stod(s.substr(0, colon));
      const double b = std::stod(s.substr(colon + 1));
      if (a > 0.0 && b > 0.0) return BetaParams{a, b};
    } catch (const std::exception&) {
    }
  }
  throw CLI::ValidationError("--priors",
                             "expected kerman|jeffreys|uniform or a:b with a,b > 0, got '" + s + "'");
}

std::vector<BetaParams> parse_priors(const std::vector<std::string>& names) {
  std::vector<BetaParams> out;
  for (const std::string& n : names) out.push_back(parse_prior(n));
  return out;
}

std::string prior_label(const BetaParams& p) {
  if (p == BetaParams::kerman()) return "kerman";
  if (p == BetaParams::jeffreys()) return "jeffreys";
  if (p == BetaParams::uniform()) return "uniform";
  std::ostringstream os;
  os << p.a << ':' << p.b;
  return os.str();
}

struct MethodFlags {
  std::string method = "ahpd";
  std::vector<std::string> priors;
  std::string sampling = "srs";
  int m = 3;
  double alpha = 0.05;
  double epsilon = 0.05;
  int initial_batch = 0;
  int step_batch = 0;
  std::uint64_t seed = 1;
  std::uint64_t max_annotations = 0;
};

void add_method_flags(CLI::App* cmd, MethodFlags& f) {
  cmd->add_option("--sampling", f.sampling, "Sampling design")
      ->check(CLI::IsMember({"srs", "twcs"}))
      ->capture_default_str();
  cmd->add_option("--m", f.m, "Second-stage size per cluster (twcs)")->capture_default_str();
  cmd->add_option("--method", f.method, "Interval method")
      ->check(CLI::IsMember({"wald", "wilson", "et", "hpd", "ahpd"}))
      ->capture_default_str();
  cmd->add_option("--priors", f.priors,
                  "Beta priors (kerman|jeffreys|uniform|a:b), comma separated")
      ->delimiter(',');
  cmd->add_option("--alpha", f.alpha, "Significance level")->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon, "Margin-of-error bound (< 0.5)")
      ->capture_default_str();
  cmd->add_option("--initial-batch", f.initial_batch,
                  "First batch: triples (srs) or clusters (twcs); 0 = design default");
  cmd->add_option("--step-batch", f.step_batch, "Batch size after the first; 0 = default");
  cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--max-annotations", f.max_annotations,
                  "Abort (non-converged) past this many annotated triples; 0 = unlimited");
}

EvalConfig build_config(const MethodFlags& f, bool quiet) {
  EvalConfig cfg;
  cfg.alpha = f.alpha;
  cfg.epsilon = f.epsilon;
  cfg.sampling = f.sampling == "srs" ? SamplingScheme::srs() : SamplingScheme::twcs(f.m);
  cfg.initial_batch = f.initial_batch;
  cfg.step_batch = f.step_batch;
  cfg.seed = f.seed;
  if (f.max_annotations > 0) cfg.max_annotations = f.max_annotations;

  std::vector<BetaParams> priors = parse_priors(f.priors);
  if (f.method == "wald") {
    cfg.method = IntervalMethod::wald();
  } else if (f.method == "wilson") {
    cfg.method = IntervalMethod::wilson();
  } else if (f.method == "et" || f.method == "hpd") {
    if (priors.empty()) {
      priors.push_back(BetaParams::uniform());
      if (!quiet) std::cerr << "note: no --priors given, defaulting to the uniform prior\n";
    }
    if (priors.size() != 1) throw CLI::ValidationError("--priors", "et/hpd take exactly one prior");
    cfg.method = f.method == "et" ? IntervalMethod::et(priors[0]) : IntervalMethod::hpd(priors[0]);
  } else {
    if (priors.empty()) {
      priors = {BetaParams::kerman(), BetaParams::jeffreys(), BetaParams::uniform()};
      if (!quiet) std::cerr << "note: no --priors given, ahpd defaults to kerman,jeffreys,uniform\n";
    }
    cfg.method = IntervalMethod::ahpd(priors);
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
    throw CLI::ValidationError("--epsilon", "epsilon must be in (0, 0.5)");
  }
  cfg.validate();
  return cfg;
}

void print_report(const EvalReport& rep, const EvalConfig& cfg) {
  std::cout.precision(6);
  std::cout << "mu_hat      " << rep.mu_hat << "\n"
            << "interval    [" << rep.interval.lower << ", " << rep.interval.upper << "]  ("
            << method_name(rep.interval.method);
  if (rep.interval.prior) std::cout << ", prior " << prior_label(*rep.interval.prior);
  std::cout << ")\n"
            << "moe         " << rep.interval.moe << "  (epsilon " << cfg.epsilon << ")\n"
            << "triples     " << rep.n_triples << "\n"
            << "entities    " << rep.n_entities << "\n"
            << "iterations  " << rep.iterations << "\n"
            << "cost        " << rep.cost_seconds << " s  (" << rep.cost_hours() << " h)\n"
            << "status      " << stop_reason_name(rep.reason) << "\n";
}

void write_trace(const EvalReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "iteration,n,tau,mu_hat,selected_method,selected_prior,lower,upper,moe\n";
  out.precision(10);
  for (std::size_t i = 0; i < rep.trace.size(); ++i) {
    const IterationRecord& r = rep.trace[i];
    const IntervalEstimate& sel = r.candidates[r.selected];
    out << (i + 1) << ',' << r.n << ',' << r.tau << ',' << r.mu_hat << ','
        << method_name(sel.method) << ',' << (sel.prior ? prior_label(*sel.prior) : "-") << ','
        << sel.lower << ',' << sel.upper << ',' << sel.moe << '\n';
  }
}

int cmd_generate(std::size_t clusters, double mean_size, double mu, std::uint64_t seed,
                 const std::string& out_path) {
  const KnowledgeGraph kg = KnowledgeGraph::generate_synthetic(clusters, mean_size, mu, seed);
  kg.save_tsv(out_path);
  std::cout << "wrote " << kg.size() << " triples in " << kg.cluster_count() << " clusters to "
            << out_path << "\n"
            << "realized accuracy " << kg.true_accuracy() << "\n";
  return kExitOk;
}

struct BenchCell {
  std::string method;
  std::string data;
  std::string sampling;
};

std::vector<BenchCell> parse_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<BenchCell> cells;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    BenchCell cell;
    std::string field;
    if (!std::getline(row, cell.method, ',') || !std::getline(row, cell.data, ',')) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected method,data[,sampling]");
    }
    std::getline(row, cell.sampling, ',');
    cells.push_back(cell);
  }
  if (cells.empty()) throw std::runtime_error("matrix file has no cells: " + path);
  return cells;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph accuracy estimation from annotated samples"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic labeled KG as TSV");
  std::size_t gen_clusters = 0;
  double gen_mean_size = 1.0, gen_mu = -1.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--clusters", gen_clusters, "Number of entity clusters")->required();
  gen->add_option("--mean-size", gen_mean_size, "Mean cluster size (shifted geometric)")
      ->required();
  gen->add_option("--mu", gen_mu, "Probability a triple is correct")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output TSV path");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Run one evaluation loop on a dataset");
  std::string ev_data, ev_annotator = "oracle", ev_labels, ev_trace;
  MethodFlags ev_flags;
  ev->add_option("--data", ev_data, "Dataset TSV")->required();
  add_method_flags(ev, ev_flags);
  ev->add_option("--annotator", ev_annotator, "Label source")
      ->check(CLI::IsMember({"oracle", "interactive", "file"}))
      ->capture_default_str();
  ev->add_option("--labels", ev_labels, "Label file for --annotator file (one 0/1 per line)");
  ev->add_option("--trace-out", ev_trace, "Write the per-iteration trace CSV here");

  // bench
  auto* be = app.add_subcommand("bench", "Replicate evaluations and tabulate statistics");
  std::string be_data, be_out, be_format = "csv", be_matrix;
  int be_reps = 0, be_workers = 1;
  bool be_raw = false;
  MethodFlags be_flags;
  be->add_option("--data", be_data, "Dataset TSV");
  add_method_flags(be, be_flags);
  be->add_option("--reps", be_reps, "Replications per cell")->required();
  be->add_option("--workers", be_workers, "Worker threads")->capture_default_str();
  be->add_option("--out", be_out, "Report path");
  be->add_option("--format", be_format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  be->add_flag("--raw", be_raw, "Embed per-run vectors in JSON reports");
  be->add_option("--matrix", be_matrix, "CSV of method,data[,sampling] cells to run");

  // prior-width
  auto* pw = app.add_subcommand("prior-width", "Expected interval width per prior");
  int pw_n = 30;
  double pw_alpha = 0.05, pw_step = 0.01;
  std::string pw_method = "hpd", pw_out;
  std::vector<std::string> pw_priors = {"kerman", "jeffreys", "uniform"};
  bool pw_assert = false;
  pw->add_option("--n", pw_n, "Annotated sample size")->capture_default_str();
  pw->add_option("--alpha", pw_alpha, "Significance level")->capture_default_str();
  pw->add_option("--priors", pw_priors, "Priors to compare")->delimiter(',');
  pw->add_option("--method", pw_method, "Interval family")
      ->check(CLI::IsMember({"et", "hpd"}))
      ->capture_default_str();
  pw->add_option("--grid-step", pw_step, "Accuracy grid step")->capture_default_str();
  pw->add_option("--out", pw_out, "Output CSV path");
  pw->add_flag("--assert-jeffreys-dominated", pw_assert,
               "Fail unless the jeffreys column is never the strict minimum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      if (!(gen_mu >= 0.0 && gen_mu <= 1.0)) {
        std::cerr << "error: --mu must be in [0, 1]\n";
        return kExitUsage;
      }
      if (gen_clusters < 1 || gen_mean_size < 1.0) {
        std::cerr << "error: need --clusters >= 1 and --mean-size >= 1\n";
        return kExitUsage;
      }
      return cmd_generate(gen_clusters, gen_mean_size, gen_mu, gen_seed,
                          resolve_out(gen_out, "synthetic.tsv"));
    }

    if (ev->parsed()) {
      const EvalConfig cfg = build_config(ev_flags, false);
      const KnowledgeGraph kg = KnowledgeGraph::load_tsv(ev_data);
      std::ifstream label_stream;
      Annotator annot;
      if (ev_annotator == "oracle") {
        annot = oracle_annotator(kg);
      } else if (ev_annotator == "interactive") {
        annot = interactive_annotator(kg, std::cin, std::cout);
      } else {
        if (ev_labels.empty()) {
          std::cerr << "error: --annotator file requires --labels\n";
          return kExitUsage;
        }
        label_stream.open(ev_labels);
        if (!label_stream) throw std::runtime_error("cannot open: " + ev_labels);
        annot = file_annotator(label_stream);
      }
      Rng rng(cfg.seed);
      const EvalReport rep = run_evaluation(kg, cfg, annot, rng);
      print_report(rep, cfg);
      if (!ev_trace.empty()) write_trace(rep, ev_trace);
      return rep.converged ? kExitOk : kExitNotConverged;
    }

    if (be->parsed()) {
      if (be_reps < 1) {
        std::cerr << "error: --reps must be >= 1\n";
        return kExitUsage;
      }
      std::vector<BenchCell> cells;
      if (!be_matrix.empty()) {
        cells = parse_matrix(be_matrix);
      } else {
        if (be_data.empty()) {
          std::cerr << "error: need --data or --matrix\n";
          return kExitUsage;
        }
        cells.push_back({be_flags.method, be_data, be_flags.sampling});
      }
      std::vector<ReplicationSummary> summaries;
      for (const BenchCell& cell : cells) {
        MethodFlags flags = be_flags;
        flags.method = cell.method;
        if (!cell.sampling.empty()) flags.sampling = cell.sampling;
        const EvalConfig cfg = build_config(flags, true);
        const KnowledgeGraph kg = KnowledgeGraph::load_tsv(cell.data);
        ReplicationSummary s = replicate(kg, cfg, be_reps, flags.seed, be_workers);
        s.dataset = std::filesystem::path(cell.data).stem().string();
        std::cout << s.dataset << " " << s.sampling << " " << s.method << ": triples "
                  << s.triples_mean << " +- " << s.triples_std << ", cost_h " << s.cost_h_mean
                  << " +- " << s.cost_h_std << ", converged " << s.converged_frac << "\n";
        summaries.push_back(std::move(s));
      }
      const std::string out =
          resolve_out(be_out, be_format == "csv" ? "bench.csv" : "bench.json");
      emit_report(summaries, be_format == "csv" ? ReportFormat::csv : ReportFormat::json, out,
                  be_raw);
      std::cout << "wrote " << out << "\n";
      for (const ReplicationSummary& s : summaries) {
        if (s.converged_frac == 0.0) return kExitNotConverged;
      }
      return kExitOk;
    }

    // prior-width
    if (pw_n < 1 || !(pw_alpha > 0.0 && pw_alpha < 1.0) || pw_step <= 0.0 || pw_step >= 0.5) {
      std::cerr << "error: need --n >= 1, alpha in (0,1), grid-step in (0, 0.5)\n";
      return kExitUsage;
    }
    const std::vector<BetaParams> priors = parse_priors(pw_priors);
    if (priors.empty()) {
      std::cerr << "error: need at least one prior\n";
      return kExitUsage;
    }
    std::vector<double> grid;
    for (double mu = pw_step; mu < 1.0 - pw_step / 2.0; mu += pw_step) grid.push_back(mu);
    const Method method = pw_method == "et" ? Method::et : Method::hpd;
    std::vector<std::vector<double>> columns;
    for (const BetaParams& p : priors) {
      columns.push_back(expected_width(p, pw_n, pw_alpha, grid, method));
    }
    const std::string out = resolve_out(pw_out, "prior_width.csv");
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open for writing: " + out);
    os << "mu";
    for (std::size_t c = 0; c < priors.size(); ++c) os << ',' << prior_label(priors[c]);
    os << '\n';
    os.precision(10);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << grid[i];
      for (const auto& col : columns) os << ',' << col[i];
      os << '\n';
    }
    std::cout << "wrote " << out << " (" << grid.size() << " rows x " << priors.size()
              << " priors)\n";
    if (pw_assert) {
      std::ptrdiff_t jeffreys = -1;
      for (std::size_t c = 0; c < priors.size(); ++c) {
        if (priors[c] == BetaParams::jeffreys()) jeffreys = static_cast<std::ptrdiff_t>(c);
      }
      if (jeffreys < 0) {
        std::cerr << "error: --assert-jeffreys-dominated needs jeffreys among --priors\n";
        return kExitUsage;
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        bool strictly_min = true;
        for (std::size_t c = 0; c < columns.size(); ++c) {
          if (static_cast<std::ptrdiff_t>(c) == jeffreys) continue;
          if (columns[c][i] <= columns[jeffreys][i]) strictly_min = false;
        }
        if (strictly_min) {
          std::cerr << "jeffreys is strictly minimal at mu=" << grid[i] << "\n";
          return kExitNotConverged;
        }
      }
      std::cout << "jeffreys column is dominated at every grid point\n";
    }
    return kExitOk;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
