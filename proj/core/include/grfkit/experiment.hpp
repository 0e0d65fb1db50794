#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "grfkit/generators.hpp"
#include "grfkit/series.hpp"
#include "grfkit/spectral.hpp"
#include "grfkit/walks.hpp"

namespace grfkit {

/// Header comment line of every CSV the harness writes.
inline constexpr const char* kCsvVersionLine = "# grf-kit v1";

using GraphSource = std::variant<GeneratorSpec, std::filesystem::path>;

struct ExperimentSpec {
  GraphSource graph = GeneratorSpec::ladder(10);
  /// Ground truth the estimates are scored against.
  KernelSpec kernel = KernelSpec::diffusion(0.5);
  /// Series the walkers estimate; defaults to `kernel`. Lets a
  /// matern_laplacian estimator be scored against matern_distance truth.
  std::optional<KernelSpec> estimator_kernel;
  std::vector<std::size_t> walker_counts{2, 4, 8, 16};
  std::size_t repeats = 100;
  double p_term = 0.5;
  std::vector<Coupling> couplings{Coupling::iid, Coupling::antithetic};
  std::uint64_t base_seed = 0;
  std::size_t kmax = kDefaultKmax;
  /// Defaults to default_modulation_mode of the estimator family.
  std::optional<ModulationMode> mode;
  std::string graph_id = "0";
  /// 0 defers to GRFKIT_THREADS / hardware concurrency.
  std::size_t threads = 0;
  /// Test hook: every coupling runs on IID draws (the rows keep their
  /// coupling labels), which makes the couplings indistinguishable.
  bool force_iid_draws = false;

  void validate() const;
};

struct ErrorRow {
  std::string graph_id;
  std::string family;
  std::size_t n = 0;
  std::string kernel;
  Coupling coupling = Coupling::iid;
  std::size_t num_walkers = 0;
  std::size_t repeat = 0;
  double rel_frob_error = 0.0;
};

struct SummaryRow {
  std::string graph_id;
  std::string family;
  std::size_t n = 0;
  std::string kernel;
  Coupling coupling = Coupling::iid;
  std::size_t num_walkers = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  /// Mean strictly below every other coupling's mean in the same cell.
  bool win = false;
};

struct CellFailure {
  std::string graph_id;
  std::string cell;
  std::string message;
};

struct ExperimentReport {
  std::vector<ErrorRow> rows;
  std::vector<SummaryRow> summaries;
  std::vector<CellFailure> failures;

  const SummaryRow* find(std::string_view graph_id, Coupling coupling,
                         std::size_t num_walkers) const;
};

/// ||K - K^||_F / ||K||_F.
double rel_frobenius(const Matrix& exact, const Matrix& estimate);

/// Seed of repeat r: base ^ mix64(r).
std::uint64_t repeat_seed(std::uint64_t base_seed, std::size_t repeat) noexcept;

/// All couplings and walker counts within a repeat share one seed, so they
/// see common random numbers and differ only through the TRV coupling.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Groups rows by (graph, kernel, coupling, walkers) in first-appearance
/// order; sample standard deviation; win flags per (graph, walkers).
std::vector<SummaryRow> summarize(std::span<const ErrorRow> rows);

struct WinRateSpec {
  /// Family and parameters; the seed is replaced per graph.
  GeneratorSpec graph_template = GeneratorSpec::erdos_renyi(60, 0.15);
  std::size_t num_graphs = 50;
  /// Protocol for each graph; its graph, graph_id and base_seed are
  /// overwritten. Must contain both couplings.
  ExperimentSpec experiment;
  std::uint64_t base_seed = 0;
  std::size_t threads = 0;
};

struct GraphOutcome {
  std::size_t index = 0;
  std::uint64_t graph_seed = 0;
  double iid_mean = 0.0;
  double antithetic_mean = 0.0;
  bool win = false;
  std::optional<std::string> failure;
};

struct WinRateResult {
  /// wins / evaluated; NaN when no graph could be evaluated.
  double win_rate = 0.0;
  std::size_t wins = 0;
  std::size_t evaluated = 0;
  std::vector<GraphOutcome> graphs;
  ExperimentReport report;
};

/// A graph is a win when the antithetic mean error at the largest walker
/// count is strictly below the IID mean. Failed graphs leave the denominator.
WinRateResult win_rate_study(const WinRateSpec& spec);

/// One-sided sign test: P[Binomial(trials, 1/2) >= successes].
double sign_test_p_value(std::size_t successes, std::size_t trials);

void write_raw_csv(std::ostream& out, std::span<const ErrorRow> rows);
std::vector<ErrorRow> read_raw_csv(std::istream& in);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
void write_win_rate_csv(std::ostream& out, const WinRateResult& result);

Coupling parse_coupling(std::string_view text);

}  // namespace grfkit
