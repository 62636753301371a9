#include "kgeval/evaluator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace kgeval {

namespace {

std::size_t hash_mix(std::size_t h, std::uint64_t v) {
  return h ^ (std::hash<std::uint64_t>{}(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
}

std::vector<std::uint8_t> run_annotator(const Annotator& annot,
                                        const std::vector<std::uint32_t>& batch) {
  std::vector<std::uint8_t> labels = annot(batch);
  if (labels.size() != batch.size()) {
    throw std::runtime_error("annotator returned wrong number of labels");
  }
  for (std::uint8_t v : labels) {
    if (v > 1) throw std::runtime_error("annotator returned a label outside {0, 1}");
  }
  return labels;
}

}  // namespace

const char* method_kind_name(MethodKind m) {
  switch (m) {
    case MethodKind::wald: return "wald";
    case MethodKind::wilson: return "wilson";
    case MethodKind::et: return "et";
    case MethodKind::hpd: return "hpd";
    case MethodKind::ahpd: return "ahpd";
  }
  return "?";
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::population_exhausted: return "population-exhausted";
    case StopReason::budget_exhausted: return "budget-exhausted";
    case StopReason::annotator_closed: return "annotator-closed";
  }
  return "?";
}

int EvalConfig::resolved_initial() const {
  if (initial_batch > 0) return initial_batch;
  return sampling.kind == SamplingKind::srs ? 30 : 10;
}

int EvalConfig::resolved_step() const { return step_batch > 0 ? step_batch : 1; }

void EvalConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("epsilon must be in (0, 0.5)");
  }
  if (initial_batch < 0 || step_batch < 0) throw std::invalid_argument("negative batch size");
  if (cost_c1 < 0.0 || cost_c2 < 0.0) throw std::invalid_argument("negative cost constant");
  if (sampling.kind == SamplingKind::twcs) {
    if (sampling.m < 1) throw std::invalid_argument("second-stage size m must be >= 1");
    if (resolved_initial() < 2) {
      throw std::invalid_argument("cluster sampling needs an initial batch of >= 2 clusters");
    }
  }
  const bool credible = method.kind == MethodKind::et || method.kind == MethodKind::hpd ||
                        method.kind == MethodKind::ahpd;
  if (credible) {
    if (method.priors.empty()) throw std::invalid_argument("credible method needs a prior");
    for (const BetaParams& p : method.priors) {
      if (!p.valid()) throw std::invalid_argument("prior shapes must be positive");
    }
  }
  if ((method.kind == MethodKind::et || method.kind == MethodKind::hpd) &&
      method.priors.size() != 1) {
    throw std::invalid_argument("et/hpd take exactly one prior");
  }
  if (max_annotations && *max_annotations < 1) {
    throw std::invalid_argument("max_annotations must be >= 1");
  }
}

double annotation_cost(std::uint64_t n_entities, std::uint64_t n_triples, double c1,
                       double c2) {
  return static_cast<double>(n_entities) * c1 + static_cast<double>(n_triples) * c2;
}

Annotator oracle_annotator(const KnowledgeGraph& kg) {
  if (!kg.fully_labeled()) {
    throw std::runtime_error("oracle annotator requires a fully labeled knowledge graph");
  }
  return [&kg](const std::vector<std::uint32_t>& batch) {
    std::vector<std::uint8_t> labels;
    labels.reserve(batch.size());
    for (std::uint32_t i : batch) labels.push_back(static_cast<std::uint8_t>(kg.triple(i).label));
    return labels;
  };
}

Annotator interactive_annotator(const KnowledgeGraph& kg, std::istream& in,
                                std::ostream& out) {
  return [&kg, &in, &out](const std::vector<std::uint32_t>& batch) {
    std::vector<std::uint8_t> labels;
    labels.reserve(batch.size());
    std::string token;
    for (std::uint32_t i : batch) {
      out << kg.triple_text(i) << "\n";
      for (;;) {
        out << "correct? [1/0]: " << std::flush;
        if (!(in >> token)) throw AnnotatorClosed();
        if (token == "0" || token == "1") {
          labels.push_back(token == "1" ? 1 : 0);
          break;
        }
        out << "please answer 1 (correct) or 0 (incorrect)\n";
      }
    }
    return labels;
  };
}

Annotator file_annotator(std::istream& in) {
  return [&in](const std::vector<std::uint32_t>& batch) {
    std::vector<std::uint8_t> labels;
    labels.reserve(batch.size());
    std::string token;
    while (labels.size() < batch.size()) {
      if (!(in >> token)) throw AnnotatorClosed();
      if (token == "0" || token == "1") {
        labels.push_back(token == "1" ? 1 : 0);
      } else {
        throw std::runtime_error("label file entry is not 0 or 1: " + token);
      }
    }
    return labels;
  };
}

std::size_t CredibleCache::KeyHash::operator()(const Key& k) const {
  std::size_t h = std::hash<int>{}(static_cast<int>(k.method));
  h = hash_mix(h, std::bit_cast<std::uint64_t>(k.a));
  h = hash_mix(h, std::bit_cast<std::uint64_t>(k.b));
  h = hash_mix(h, std::bit_cast<std::uint64_t>(k.alpha));
  return h;
}

const IntervalEstimate* CredibleCache::find(Method method, const BetaParams& post,
                                            double alpha) const {
  auto it = map_.find(Key{post.a, post.b, alpha, method});
  return it == map_.end() ? nullptr : &it->second;
}

void CredibleCache::insert(Method method, const BetaParams& post, double alpha,
                           const IntervalEstimate& e) {
  map_.emplace(Key{post.a, post.b, alpha, method}, e);
}

namespace {

IntervalEstimate cached_credible(Method method, const BetaParams& prior, double tau,
                                 double n, double alpha, CredibleCache* cache) {
  const BetaParams post = posterior_update(prior, tau, n);
  if (cache) {
    if (const IntervalEstimate* hit = cache->find(method, post, alpha)) {
      IntervalEstimate e = *hit;
      e.prior = prior;
      return e;
    }
  }
  IntervalEstimate e = method == Method::et ? et_cri(post, alpha) : hpd_cri(post, alpha);
  if (cache) cache->insert(method, post, alpha, e);
  e.prior = prior;
  return e;
}

}  // namespace

EvalReport run_evaluation(const KnowledgeGraph& kg, const EvalConfig& config,
                          const Annotator& annotator, Rng& rng, CredibleCache* cache,
                          bool keep_trace) {
  config.validate();
  if (kg.size() == 0) throw std::invalid_argument("empty knowledge graph");

  const MethodKind method = config.method.kind;
  const bool needs_design_effect =
      config.sampling.kind == SamplingKind::twcs && method != MethodKind::wald;

  AnnotatedSample sample;
  std::unordered_set<std::uint32_t> drawn;  // srs without-replacement bookkeeping
  EvalReport report;
  CredibleCache local_cache;
  if (!cache && method != MethodKind::wald && method != MethodKind::wilson) {
    cache = &local_cache;
  }

  for (;;) {
    const int batch =
        report.iterations == 0 ? config.resolved_initial() : config.resolved_step();

    // Draw the batch and find the not-yet-annotated triples in it.
    std::vector<std::uint32_t> new_triples;
    std::vector<ClusterDraw> draws;
    if (config.sampling.kind == SamplingKind::srs) {
      if (drawn.size() + static_cast<std::size_t>(batch) > kg.size()) {
        report.reason = StopReason::population_exhausted;
        break;
      }
      new_triples = srs_draw(kg, static_cast<std::size_t>(batch), drawn, rng);
    } else {
      draws = twcs_draw(kg, static_cast<std::size_t>(batch),
                        static_cast<std::size_t>(config.sampling.m), rng);
      for (const ClusterDraw& d : draws) {
        for (std::uint32_t t : d.triples) {
          if (!sample.labels.count(t) &&
              std::find(new_triples.begin(), new_triples.end(), t) == new_triples.end()) {
            new_triples.push_back(t);
          }
        }
      }
    }
    if (config.max_annotations &&
        sample.labels.size() + new_triples.size() > *config.max_annotations) {
      report.reason = StopReason::budget_exhausted;
      break;
    }

    std::vector<std::uint8_t> new_labels;
    try {
      new_labels = run_annotator(annotator, new_triples);
    } catch (const AnnotatorClosed&) {
      report.reason = StopReason::annotator_closed;
      break;
    }
    for (std::size_t i = 0; i < new_triples.size(); ++i) {
      sample.labels.emplace(new_triples[i], new_labels[i]);
    }

    // Merge the batch into the accumulated sample.
    if (config.sampling.kind == SamplingKind::srs) {
      for (std::uint32_t t : new_triples) {
        const std::uint8_t lab = sample.labels.at(t);
        sample.entries.emplace_back(t, lab);
        sample.tau += lab;
        sample.entities.insert(kg.triple(t).subject);
        drawn.insert(t);
      }
    } else {
      for (const ClusterDraw& d : draws) {
        GroupStat g;
        g.cluster = d.cluster;
        for (std::uint32_t t : d.triples) {
          const std::uint8_t lab = sample.labels.at(t);
          sample.entries.emplace_back(t, lab);
          sample.tau += lab;
          g.drawn += 1;
          g.correct += lab;
        }
        sample.entities.insert(kg.cluster(d.cluster).entity);
        sample.groups.push_back(g);
      }
    }

    // Estimate under the design, then build the configured interval(s).
    const EstimateWithVariance est =
        config.sampling.kind == SamplingKind::srs
            ? estimate_srs(sample)
            : (needs_design_effect ? design_effect_adjust(sample) : estimate_twcs(sample));

    std::vector<IntervalEstimate> candidates;
    switch (method) {
      case MethodKind::wald:
        candidates.push_back(wald(est, config.alpha));
        break;
      case MethodKind::wilson:
        candidates.push_back(wilson(est.mu_hat, est.effective_n, config.alpha));
        break;
      case MethodKind::et:
        candidates.push_back(cached_credible(Method::et, config.method.priors[0],
                                             est.effective_tau, est.effective_n,
                                             config.alpha, cache));
        break;
      case MethodKind::hpd:
        candidates.push_back(cached_credible(Method::hpd, config.method.priors[0],
                                             est.effective_tau, est.effective_n,
                                             config.alpha, cache));
        break;
      case MethodKind::ahpd:
        for (const BetaParams& prior : config.method.priors) {
          candidates.push_back(cached_credible(Method::hpd, prior, est.effective_tau,
                                               est.effective_n, config.alpha, cache));
        }
        break;
    }
    int selected = 0;
    for (int i = 1; i < static_cast<int>(candidates.size()); ++i) {
      if (candidates[i].width() < candidates[selected].width()) selected = i;
    }

    report.iterations += 1;
    report.mu_hat = est.mu_hat;
    report.interval = candidates[selected];
    if (keep_trace) {
      IterationRecord rec;
      rec.n = sample.n();
      rec.tau = static_cast<double>(sample.tau);
      rec.mu_hat = est.mu_hat;
      rec.candidates = std::move(candidates);
      rec.selected = selected;
      report.trace.push_back(std::move(rec));
    }
    if (report.interval.moe <= config.epsilon) {
      report.reason = StopReason::converged;
      report.converged = true;
      break;
    }
  }

  report.n_triples = sample.distinct_triples();
  report.n_entities = sample.entities.size();
  report.n_instances = sample.n();
  report.cost_seconds =
      annotation_cost(report.n_entities, report.n_triples, config.cost_c1, config.cost_c2);
  return report;
}

}  // namespace kgeval
