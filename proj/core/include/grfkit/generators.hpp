#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "grfkit/graph.hpp"

namespace grfkit {

enum class GraphFamily { erdos_renyi, barabasi_albert, binary_tree, ladder };

/// Parameters for a synthetic graph.
///
/// `n` is the vertex count for erdos_renyi and barabasi_albert, the height
/// for binary_tree and the rung count for ladder. `p_edge` is required for
/// erdos_renyi only and `m_attach` for barabasi_albert only.
struct GeneratorSpec {
  GraphFamily family = GraphFamily::ladder;
  std::size_t n = 0;
  std::optional<double> p_edge;
  std::optional<std::size_t> m_attach;
  std::uint64_t seed = 0;

  static GeneratorSpec erdos_renyi(std::size_t n, double p, std::uint64_t seed = 0);
  static GeneratorSpec barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed = 0);
  static GeneratorSpec binary_tree(std::size_t height);
  static GeneratorSpec ladder(std::size_t rungs);

  void validate() const;
  /// Short human label, e.g. "erdos_renyi(n=20,p=0.4)".
  std::string label() const;
};

std::string to_string(GraphFamily family);

/// ER regeneration budget when a draw leaves a vertex isolated.
inline constexpr int kMaxRegenerationAttempts = 1000;

/// Deterministic in `spec` (including the seed).
Graph generate(const GeneratorSpec& spec);

}  // namespace grfkit
