#include "grfkit/walks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "grfkit/error.hpp"
#include "grfkit/parallel.hpp"

namespace grfkit {

std::string to_string(Coupling coupling) {
  return coupling == Coupling::iid ? "iid" : "antithetic";
}

std::string to_string(Ensemble ensemble) {
  return ensemble == Ensemble::first ? "first" : "second";
}

TrvStream::TrvStream(std::uint64_t seed, StreamId id) noexcept
    : key_(Philox4x32::key_from_seed(seed)), id_(id) {}

StepDraw TrvStream::draw(std::uint32_t step) const noexcept {
  const auto block = Philox4x32::block(
      {id_.vertex, id_.walker, step, static_cast<std::uint32_t>(id_.ensemble)}, key_);
  const auto word = [&](int hi) {
    return (static_cast<std::uint64_t>(block[hi]) << 32) | block[hi + 1];
  };
  return {unit_interval(word(0)), word(2)};
}

double antithetic_trv(double t) noexcept {
  const double shifted = t + 0.5;
  return shifted >= 1.0 ? shifted - 1.0 : shifted;
}

WalkerDraws::WalkerDraws(std::uint64_t seed, StreamId id, Coupling coupling) noexcept
    : own_(seed, id),
      partner_(seed, StreamId{id.vertex, id.walker & ~1u, id.ensemble}),
      antithetic_(coupling == Coupling::antithetic && id.walker % 2 == 1) {}

StepDraw WalkerDraws::draw(std::uint32_t step) const noexcept {
  StepDraw d = own_.draw(step);
  if (antithetic_) d.trv = antithetic_trv(partner_.trv(step));
  return d;
}

WalkTable::WalkTable(const Graph& g, double p_term) : p_term_(p_term) {
  if (!(p_term > 0.0 && p_term < 1.0)) throw Error("termination probability must lie in (0, 1)");
  const auto n = g.num_vertices();
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + g.degree(v);
  neighbor_.reserve(offsets_.back());
  factor_.reserve(offsets_.back());
  for (std::size_t u = 0; u < n; ++u) {
    const auto nbrs = g.neighbors(u);
    const auto weights = g.neighbor_weights(u);
    const double deg = static_cast<double>(nbrs.size());
    for (std::size_t s = 0; s < nbrs.size(); ++s) {
      const double normalized =
          weights[s] / std::sqrt(g.weighted_degree(u) * g.weighted_degree(nbrs[s]));
      neighbor_.push_back(nbrs[s]);
      factor_.push_back(normalized * deg / (1.0 - p_term));
    }
  }
}

void WalkEnsembleConfig::validate(std::size_t kmax) const {
  if (num_walkers < 1) throw Error("num_walkers must be >= 1");
  if (coupling == Coupling::antithetic && num_walkers % 2 != 0) {
    throw Error("antithetic coupling needs an even number of walkers");
  }
  if (!(p_term > 0.0 && p_term < 1.0)) throw Error("p_term must lie in (0, 1)");
  if (max_steps != 0 && max_steps < kmax) throw Error("max_steps must be >= Kmax");
}

std::size_t WalkEnsembleConfig::resolved_max_steps(std::size_t kmax) const noexcept {
  return max_steps != 0 ? max_steps : 10 * kmax;
}

void WalkDiagnostics::record(const WalkOutcome& outcome, double min_weight, double max_weight) {
  if (length_histogram.size() <= outcome.length) length_histogram.resize(outcome.length + 1, 0);
  ++length_histogram[outcome.length];
  if (outcome.truncated) ++truncated;
  weight_min = walks == 0 ? min_weight : std::min(weight_min, min_weight);
  weight_max = walks == 0 ? max_weight : std::max(weight_max, max_weight);
  ++walks;
}

void WalkDiagnostics::merge(const WalkDiagnostics& other) {
  if (other.walks == 0) return;
  if (length_histogram.size() < other.length_histogram.size()) {
    length_histogram.resize(other.length_histogram.size(), 0);
  }
  for (std::size_t k = 0; k < other.length_histogram.size(); ++k) {
    length_histogram[k] += other.length_histogram[k];
  }
  weight_min = walks == 0 ? other.weight_min : std::min(weight_min, other.weight_min);
  weight_max = walks == 0 ? other.weight_max : std::max(weight_max, other.weight_max);
  walks += other.walks;
  truncated += other.truncated;
}

std::string WalkDiagnostics::to_json_line(Ensemble ensemble) const {
  nlohmann::json j = {
      {"ensemble", to_string(ensemble)},
      {"walks", walks},
      {"length_histogram", length_histogram},
      {"truncated", truncated},
      {"weight_min", weight_min},
      {"weight_max", weight_max},
  };
  return j.dump();
}

FeatureSet build_features(const Graph& g, const ModulationSeries& mod,
                          const WalkEnsembleConfig& cfg, Ensemble ensemble,
                          std::size_t threads) {
  const std::size_t kmax = mod.truncation_order();
  cfg.validate(kmax);
  if (mod.f1.size() != mod.f2.size()) throw Error("modulation sequences differ in length");
  const auto& f = ensemble == Ensemble::first ? mod.f1 : mod.f2;
  const std::size_t max_steps = cfg.resolved_max_steps(kmax);
  const WalkTable table(g, cfg.p_term);
  const auto n = g.num_vertices();

  FeatureSet out;
  out.ensemble = ensemble;
  out.values = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<WalkDiagnostics> per_vertex(n);

  parallel_for(n, threads, [&](std::size_t i) {
    Vector row = Vector::Zero(static_cast<Eigen::Index>(n));
    auto& diag = per_vertex[i];
    for (std::size_t w = 0; w < cfg.num_walkers; ++w) {
      const WalkerDraws draws(cfg.seed,
                              {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(w), ensemble},
                              cfg.coupling);
      double lo = 1.0;
      double hi = 1.0;
      const auto outcome = run_walk(table, i, draws, max_steps,
                                    [&](std::size_t step, std::size_t v, double weight) {
                                      lo = std::min(lo, weight);
                                      hi = std::max(hi, weight);
                                      if (step <= kmax && f[step] != 0.0) {
                                        row(static_cast<Eigen::Index>(v)) += f[step] * weight;
                                      }
                                    });
      diag.record(outcome, lo, hi);
    }
    out.values.row(static_cast<Eigen::Index>(i)) = row / static_cast<double>(cfg.num_walkers);
  });

  for (const auto& d : per_vertex) out.diagnostics.merge(d);
  return out;
}

KernelEstimate estimate_kernel(const Graph& g, const ModulationSeries& mod,
                               const WalkEnsembleConfig& cfg, std::size_t threads) {
  auto phi = build_features(g, mod, cfg, Ensemble::first, threads);
  auto psi = build_features(g, mod, cfg, Ensemble::second, threads);
  Matrix k = phi.values * psi.values.transpose();
  k = 0.5 * (k + k.transpose()).eval();
  return {std::move(k), std::move(phi.diagnostics), std::move(psi.diagnostics)};
}

Matrix expected_kernel(const Graph& g, const ModulationSeries& mod) {
  const auto a = normalized_laplacian(g).adjacency;
  const Matrix first = series_matrix(a, mod.f1);
  const Matrix second = series_matrix(a, mod.f2);
  Matrix k = first * second;
  return 0.5 * (k + k.transpose());
}

}  // namespace grfkit
