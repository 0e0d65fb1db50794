#pragma once

// Shortest hop distance by exhaustive enumeration of simple paths.

#include <cstddef>
#include <limits>
#include <vector>

#include "grfkit/graph.hpp"

namespace grfkit::oracle {

inline std::size_t shortest_simple_path(const Graph& g, std::size_t from, std::size_t to) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<bool> on_path(g.num_vertices(), false);
  auto dfs = [&](auto&& self, std::size_t at, std::size_t length) -> void {
    if (at == to) {
      best = std::min(best, length);
      return;
    }
    on_path[at] = true;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      if (g.adjacency()(at, v) > 0 && !on_path[v]) self(self, v, length + 1);
    }
    on_path[at] = false;
  };
  dfs(dfs, from, 0);
  return best;
}

}  // namespace grfkit::oracle
