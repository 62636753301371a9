#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kgeval/bench.hpp"
#include "kgeval/evaluator.hpp"

namespace py = pybind11;
using namespace kgeval;

namespace {

SamplingScheme make_sampling(const std::string& name, int m) {
  if (name == "srs") return SamplingScheme::srs();
  if (name == "twcs") return SamplingScheme::twcs(m);
  throw std::invalid_argument("sampling must be 'srs' or 'twcs'");
}

IntervalMethod make_method(const std::string& name, std::vector<BetaParams> priors) {
  if (name == "wald") return IntervalMethod::wald();
  if (name == "wilson") return IntervalMethod::wilson();
  if (priors.empty()) {
    if (name == "ahpd") return IntervalMethod::ahpd_default();
    priors.push_back(BetaParams::uniform());
  }
  if (name == "et") return IntervalMethod::et(priors.at(0));
  if (name == "hpd") return IntervalMethod::hpd(priors.at(0));
  if (name == "ahpd") return IntervalMethod::ahpd(std::move(priors));
  throw std::invalid_argument("unknown method: " + name);
}

EvalConfig make_config(double alpha, double epsilon, const std::string& sampling, int m,
                       const std::string& method, std::vector<BetaParams> priors,
                       int initial_batch, int step_batch, double c1, double c2,
                       std::uint64_t seed, std::optional<std::uint64_t> max_annotations) {
  EvalConfig cfg;
  cfg.alpha = alpha;
  cfg.epsilon = epsilon;
  cfg.sampling = make_sampling(sampling, m);
  cfg.method = make_method(method, std::move(priors));
  cfg.initial_batch = initial_batch;
  cfg.step_batch = step_batch;
  cfg.cost_c1 = c1;
  cfg.cost_c2 = c2;
  cfg.seed = seed;
  cfg.max_annotations = max_annotations;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(kgeval, mod) {
  mod.doc() = "Knowledge-graph accuracy estimation from annotated samples";

  py::class_<BetaParams>(mod, "BetaParams")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_readwrite("a", &BetaParams::a)
      .def_readwrite("b", &BetaParams::b)
      .def("mean", &BetaParams::mean)
      .def_static("kerman", &BetaParams::kerman)
      .def_static("jeffreys", &BetaParams::jeffreys)
      .def_static("uniform", &BetaParams::uniform)
      .def("__repr__", [](const BetaParams& p) {
        std::ostringstream os;
        os << "BetaParams(a=" << p.a << ", b=" << p.b << ")";
        return os.str();
      });

  mod.def("log_gamma", &log_gamma, py::arg("x"));
  mod.def("beta_pdf", &beta_pdf, py::arg("x"), py::arg("params"));
  mod.def("beta_cdf", &beta_cdf, py::arg("x"), py::arg("params"));
  mod.def("beta_quantile", &beta_quantile, py::arg("q"), py::arg("params"),
          py::arg("hint") = -1.0);
  mod.def("normal_quantile", &normal_quantile, py::arg("q"));
  mod.def("student_t_sf", &student_t_sf, py::arg("t"), py::arg("df"));

  py::class_<IntervalEstimate>(mod, "IntervalEstimate")
      .def_readonly("lower", &IntervalEstimate::lower)
      .def_readonly("upper", &IntervalEstimate::upper)
      .def_readonly("moe", &IntervalEstimate::moe)
      .def_property_readonly("method",
                             [](const IntervalEstimate& e) { return method_name(e.method); })
      .def_readonly("prior", &IntervalEstimate::prior)
      .def("width", &IntervalEstimate::width)
      .def("__repr__", [](const IntervalEstimate& e) {
        std::ostringstream os;
        os << "IntervalEstimate([" << e.lower << ", " << e.upper << "], " << method_name(e.method)
           << ")";
        return os.str();
      });

  py::class_<EstimateWithVariance>(mod, "EstimateWithVariance")
      .def(py::init([](double mu_hat, double variance, double n_eff, double tau_eff) {
             return EstimateWithVariance{mu_hat, variance, n_eff, tau_eff};
           }),
           py::arg("mu_hat"), py::arg("variance"), py::arg("effective_n") = 0.0,
           py::arg("effective_tau") = 0.0)
      .def_readonly("mu_hat", &EstimateWithVariance::mu_hat)
      .def_readonly("variance", &EstimateWithVariance::variance)
      .def_readonly("effective_n", &EstimateWithVariance::effective_n)
      .def_readonly("effective_tau", &EstimateWithVariance::effective_tau);

  mod.def("wald", &wald, py::arg("estimate"), py::arg("alpha"));
  mod.def("wilson", &wilson, py::arg("mu_hat"), py::arg("n_eff"), py::arg("alpha"));
  mod.def("posterior_update", &posterior_update, py::arg("prior"), py::arg("tau"), py::arg("n"));
  mod.def("et_cri", &et_cri, py::arg("posterior"), py::arg("alpha"));
  mod.def("hpd_cri", &hpd_cri, py::arg("posterior"), py::arg("alpha"));

  py::class_<KnowledgeGraph>(mod, "KnowledgeGraph")
      .def_static("load_tsv", &KnowledgeGraph::load_tsv, py::arg("path"))
      .def_static("generate_synthetic", &KnowledgeGraph::generate_synthetic,
                  py::arg("n_clusters"), py::arg("mean_cluster_size"), py::arg("mu"),
                  py::arg("seed"))
      .def_static("from_triples",
                  [](const std::vector<std::tuple<std::string, std::string, std::string, int>>&
                         rows) {
                    KnowledgeGraph::Builder b;
                    for (const auto& [s, p, o, label] : rows) b.add(s, p, o, label);
                    return b.finish();
                  },
                  py::arg("rows"),
                  "Build from (subject, predicate, object, label) tuples; label -1 = unknown")
      .def("__len__", &KnowledgeGraph::size)
      .def("cluster_count", &KnowledgeGraph::cluster_count)
      .def("true_accuracy", &KnowledgeGraph::true_accuracy)
      .def("save_tsv", &KnowledgeGraph::save_tsv, py::arg("path"))
      .def("triple_text", &KnowledgeGraph::triple_text, py::arg("index"));

  py::class_<EvalReport>(mod, "EvalReport")
      .def_readonly("mu_hat", &EvalReport::mu_hat)
      .def_readonly("interval", &EvalReport::interval)
      .def_readonly("n_triples", &EvalReport::n_triples)
      .def_readonly("n_entities", &EvalReport::n_entities)
      .def_readonly("n_instances", &EvalReport::n_instances)
      .def_readonly("cost_seconds", &EvalReport::cost_seconds)
      .def_readonly("iterations", &EvalReport::iterations)
      .def_readonly("converged", &EvalReport::converged)
      .def_property_readonly("reason",
                             [](const EvalReport& r) { return stop_reason_name(r.reason); })
      .def("cost_hours", &EvalReport::cost_hours);

  mod.def(
      "run_evaluation",
      [](const KnowledgeGraph& kg, double alpha, double epsilon, const std::string& sampling,
         int m, const std::string& method, std::vector<BetaParams> priors, int initial_batch,
         int step_batch, double c1, double c2, std::uint64_t seed,
         std::optional<std::uint64_t> max_annotations,
         const std::optional<py::function>& annotator) {
        const EvalConfig cfg =
            make_config(alpha, epsilon, sampling, m, method, std::move(priors), initial_batch,
                        step_batch, c1, c2, seed, max_annotations);
        Annotator annot;
        if (annotator) {
          annot = [fn = *annotator](const std::vector<std::uint32_t>& batch) {
            return fn(batch).cast<std::vector<std::uint8_t>>();
          };
        } else {
          annot = oracle_annotator(kg);
        }
        Rng rng(cfg.seed);
        return run_evaluation(kg, cfg, annot, rng);
      },
      py::arg("kg"), py::arg("alpha") = 0.05, py::arg("epsilon") = 0.05,
      py::arg("sampling") = "srs", py::arg("m") = 3, py::arg("method") = "ahpd",
      py::arg("priors") = std::vector<BetaParams>{}, py::arg("initial_batch") = 0,
      py::arg("step_batch") = 0, py::arg("c1") = 45.0, py::arg("c2") = 25.0, py::arg("seed") = 1,
      py::arg("max_annotations") = std::nullopt, py::arg("annotator") = std::nullopt,
      "Run the iterative evaluation; labels come from the stored ground truth unless an "
      "annotator callable (batch of triple indices -> list of 0/1) is given.");

  py::class_<ReplicationSummary>(mod, "ReplicationSummary")
      .def_readonly("method", &ReplicationSummary::method)
      .def_readonly("dataset", &ReplicationSummary::dataset)
      .def_readonly("sampling", &ReplicationSummary::sampling)
      .def_readonly("reps", &ReplicationSummary::reps)
      .def_readonly("triples_mean", &ReplicationSummary::triples_mean)
      .def_readonly("triples_std", &ReplicationSummary::triples_std)
      .def_readonly("cost_h_mean", &ReplicationSummary::cost_h_mean)
      .def_readonly("cost_h_std", &ReplicationSummary::cost_h_std)
      .def_readonly("entities_mean", &ReplicationSummary::entities_mean)
      .def_readonly("converged_frac", &ReplicationSummary::converged_frac)
      .def("triples_raw", &ReplicationSummary::triples_raw)
      .def("cost_hours_raw", &ReplicationSummary::cost_hours_raw);

  mod.def(
      "replicate",
      [](const KnowledgeGraph& kg, int reps, std::uint64_t base_seed, int workers, double alpha,
         double epsilon, const std::string& sampling, int m, const std::string& method,
         std::vector<BetaParams> priors, int initial_batch, int step_batch, double c1, double c2,
         std::optional<std::uint64_t> max_annotations) {
        const EvalConfig cfg = make_config(alpha, epsilon, sampling, m, method, std::move(priors),
                                           initial_batch, step_batch, c1, c2, base_seed,
                                           max_annotations);
        py::gil_scoped_release release;
        return replicate(kg, cfg, reps, base_seed, workers);
      },
      py::arg("kg"), py::arg("reps"), py::arg("base_seed") = 1, py::arg("workers") = 1,
      py::arg("alpha") = 0.05, py::arg("epsilon") = 0.05, py::arg("sampling") = "srs",
      py::arg("m") = 3, py::arg("method") = "ahpd", py::arg("priors") = std::vector<BetaParams>{},
      py::arg("initial_batch") = 0, py::arg("step_batch") = 0, py::arg("c1") = 45.0,
      py::arg("c2") = 25.0, py::arg("max_annotations") = std::nullopt);

  mod.def(
      "t_test",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const TTestResult r = t_test(a, b);
        return py::make_tuple(r.t, r.p, r.df);
      },
      py::arg("a"), py::arg("b"), "Welch two-sample t test; returns (t, p, df)");

  mod.def(
      "expected_width",
      [](const BetaParams& prior, int n, double alpha, const std::vector<double>& grid,
         const std::string& method) {
        return expected_width(prior, n, alpha, grid,
                              method == "et" ? Method::et : Method::hpd);
      },
      py::arg("prior"), py::arg("n"), py::arg("alpha"), py::arg("mu_grid"),
      py::arg("method") = "hpd");
}
