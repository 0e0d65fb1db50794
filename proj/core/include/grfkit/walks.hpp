#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grfkit/graph.hpp"
#include "grfkit/random.hpp"
#include "grfkit/series.hpp"

namespace grfkit {

enum class Coupling { iid, antithetic };
enum class Ensemble : std::uint32_t { first = 0, second = 1 };

std::string to_string(Coupling coupling);
std::string to_string(Ensemble ensemble);

/// Identifies one walker's random stream.
struct StreamId {
  std::uint32_t vertex = 0;
  std::uint32_t walker = 0;
  Ensemble ensemble = Ensemble::first;
};

/// Everything a walker consumes at one step: the termination random
/// variable and the bits that pick the next neighbor.
struct StepDraw {
  double trv = 0.0;
  std::uint64_t choice = 0;
};

/// Counter-based stream: draw(step) is a pure function of
/// (seed, vertex, walker, ensemble, step). The termination variate and the
/// neighbor bits come from disjoint words of the same Philox block, so a
/// coupling that rewrites TRVs never touches neighbor selection.
class TrvStream {
 public:
  TrvStream(std::uint64_t seed, StreamId id) noexcept;

  StepDraw draw(std::uint32_t step) const noexcept;
  double trv(std::uint32_t step) const noexcept { return draw(step).trv; }
  const StreamId& id() const noexcept { return id_; }

 private:
  Philox4x32::Key key_;
  StreamId id_;
};

/// mod_1(t + 1/2).
double antithetic_trv(double t) noexcept;

/// The draws a walker sees under a coupling scheme. Under antithetic
/// coupling walkers pair up as (2j, 2j+1); the odd walker's TRV at every
/// step is antithetic_trv of the even walker's TRV at the same step,
/// whether or not the even walker is still alive.
class WalkerDraws {
 public:
  WalkerDraws(std::uint64_t seed, StreamId id, Coupling coupling) noexcept;

  StepDraw draw(std::uint32_t step) const noexcept;

 private:
  TrvStream own_;
  TrvStream partner_;
  bool antithetic_;
};

template <class D>
concept DrawSource = requires(const D& d, std::uint32_t step) {
  { d.draw(step) } -> std::same_as<StepDraw>;
};

/// Per-vertex neighbor lists with the importance factor
/// A~_uv * deg(u) / (1 - p) of each move precomputed.
class WalkTable {
 public:
  WalkTable(const Graph& g, double p_term);

  std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }
  double p_term() const noexcept { return p_term_; }
  std::size_t degree(std::size_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  std::size_t neighbor(std::size_t v, std::size_t slot) const noexcept {
    return neighbor_[offsets_[v] + slot];
  }
  double factor(std::size_t v, std::size_t slot) const noexcept {
    return factor_[offsets_[v] + slot];
  }

 private:
  double p_term_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> neighbor_;
  std::vector<double> factor_;
};

struct WalkOutcome {
  std::size_t length = 0;
  bool truncated = false;
};

/// Runs one terminating walk. At each step the TRV is drawn first; the walk
/// stops before moving when TRV < p, so length 0 is possible. Otherwise it
/// moves to a uniform neighbor and multiplies the running importance weight
/// by the table factor. visit(step, vertex, weight) fires for step 0 (the
/// start, weight 1) and after every move.
template <DrawSource D, class Visit>
WalkOutcome run_walk(const WalkTable& table, std::size_t start, const D& draws,
                     std::size_t max_steps, Visit&& visit) {
  std::size_t at = start;
  double weight = 1.0;
  visit(std::size_t{0}, at, weight);
  for (std::size_t step = 0;; ++step) {
    if (step == max_steps) return {step, true};
    const StepDraw d = draws.draw(static_cast<std::uint32_t>(step));
    if (d.trv < table.p_term()) return {step, false};
    const std::size_t slot = bounded(d.choice, table.degree(at));
    weight *= table.factor(at, slot);
    at = table.neighbor(at, slot);
    visit(step + 1, at, weight);
  }
}

struct WalkRecord {
  std::vector<std::size_t> vertices;  // vertices[k] = position after k moves
  std::vector<double> weights;        // cumulative importance weight at step k
  std::vector<double> trvs;           // termination variates consumed
  std::size_t length = 0;
  bool truncated = false;
};

template <DrawSource D>
WalkRecord sample_walk(const WalkTable& table, std::size_t start, const D& draws,
                       std::size_t max_steps) {
  WalkRecord record;
  const auto outcome = run_walk(table, start, draws, max_steps,
                                [&](std::size_t, std::size_t v, double w) {
                                  record.vertices.push_back(v);
                                  record.weights.push_back(w);
                                });
  record.length = outcome.length;
  record.truncated = outcome.truncated;
  const std::size_t consumed = outcome.truncated ? outcome.length : outcome.length + 1;
  for (std::size_t k = 0; k < consumed; ++k) {
    record.trvs.push_back(draws.draw(static_cast<std::uint32_t>(k)).trv);
  }
  return record;
}

template <DrawSource D>
WalkRecord sample_walk(const Graph& g, std::size_t start, const D& draws, double p_term,
                       std::size_t max_steps) {
  return sample_walk(WalkTable(g, p_term), start, draws, max_steps);
}

struct WalkEnsembleConfig {
  std::size_t num_walkers = 2;
  double p_term = 0.5;
  Coupling coupling = Coupling::iid;
  std::uint64_t seed = 0;
  /// 0 selects 10 * Kmax.
  std::size_t max_steps = 0;

  void validate(std::size_t kmax) const;
  std::size_t resolved_max_steps(std::size_t kmax) const noexcept;
};

/// Walk statistics for one ensemble.
struct WalkDiagnostics {
  std::uint64_t walks = 0;
  std::vector<std::uint64_t> length_histogram;
  std::uint64_t truncated = 0;
  double weight_min = 0.0;
  double weight_max = 0.0;

  void record(const WalkOutcome& outcome, double min_weight, double max_weight);
  void merge(const WalkDiagnostics& other);
  /// One JSON object on a single line (no trailing newline).
  std::string to_json_line(Ensemble ensemble) const;
};

struct FeatureVector {
  std::size_t owner = 0;
  Vector values;
  Ensemble ensemble = Ensemble::first;
};

/// Features for every vertex; row i of `values` is phi(i).
struct FeatureSet {
  Matrix values;
  Ensemble ensemble = Ensemble::first;
  WalkDiagnostics diagnostics;

  FeatureVector feature(std::size_t i) const { return {i, values.row(static_cast<Eigen::Index>(i)).transpose(), ensemble}; }
};

/// Runs cfg.num_walkers walkers from every vertex. A walker at vertex v after
/// k moves deposits f(k) times its importance weight into phi(start)_v,
/// where f is f1 for the first ensemble and f2 for the second. The result
/// depends only on (graph, modulation, cfg, ensemble), never on `threads`.
FeatureSet build_features(const Graph& g, const ModulationSeries& mod,
                          const WalkEnsembleConfig& cfg, Ensemble ensemble,
                          std::size_t threads = 1);

struct KernelEstimate {
  Matrix matrix;
  WalkDiagnostics first;
  WalkDiagnostics second;
};

/// K^ = sym(Phi Psi^T) from two independent ensembles.
KernelEstimate estimate_kernel(const Graph& g, const ModulationSeries& mod,
                               const WalkEnsembleConfig& cfg, std::size_t threads = 1);

/// Closed-form E[K^] = (sum f1_k A~^k)(sum f2_k A~^k). Equals the truncated
/// target sum_{k<=Kmax} alpha_k A~^k up to cross terms of order above Kmax
/// (exactly, in asymmetric mode).
Matrix expected_kernel(const Graph& g, const ModulationSeries& mod);

}  // namespace grfkit
