#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grfkit/experiment.hpp"

namespace grfkit::cli {

enum class Command { generate, exact, estimate, experiment, winrate, dump_series };

std::string to_string(Command command);

/// Bad flags, keys or values. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; what() carries the help text. Maps to exit code 0.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::experiment;
  std::optional<GraphSource> graph;
  std::optional<KernelSpec> kernel;
  std::optional<KernelSpec> estimator_kernel;
  std::vector<std::size_t> walkers;
  std::size_t repeats = 100;
  double p_term = 0.5;
  std::uint64_t seed = 0;
  std::size_t kmax = kDefaultKmax;
  std::vector<Coupling> couplings{Coupling::iid, Coupling::antithetic};
  std::optional<ModulationMode> mode;
  std::size_t num_graphs = 50;
  std::optional<std::filesystem::path> output_path;
  bool plot = false;
  std::optional<std::filesystem::path> diagnostics_path;
};

/// Parses `args` (without the program name). The first argument names the
/// command. `--config FILE` loads flat key=value defaults; flags given on
/// the command line override them. Everything is validated here, before any
/// computation starts.
RunConfig parse_config(std::span<const std::string> args);

/// Graph mini-language:
///   ladder:<rungs>   tree:<height>   er:<n>,p=<p>   ba:<n>,m=<m>   file:<path>
/// Long family names (erdos_renyi, barabasi_albert, binary_tree) and an
/// explicit seed=<s> are accepted; otherwise `default_seed` is used.
GraphSource parse_graph(std::string_view text, std::uint64_t default_seed);

/// Kernel mini-language:
///   diffusion[:t=..]  reglap[:s=..,d=..]  matern[:nu=..,l=..]
///   matern-lap[:nu=..,l=..]  invcos
KernelSpec parse_kernel(std::string_view text);

}  // namespace grfkit::cli
