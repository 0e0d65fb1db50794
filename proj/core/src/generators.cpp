#include "grfkit/generators.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "grfkit/error.hpp"
#include "grfkit/random.hpp"

namespace grfkit {

GeneratorSpec GeneratorSpec::erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  return {GraphFamily::erdos_renyi, n, p, std::nullopt, seed};
}

GeneratorSpec GeneratorSpec::barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  return {GraphFamily::barabasi_albert, n, std::nullopt, m, seed};
}

GeneratorSpec GeneratorSpec::binary_tree(std::size_t height) {
  return {GraphFamily::binary_tree, height, std::nullopt, std::nullopt, 0};
}

GeneratorSpec GeneratorSpec::ladder(std::size_t rungs) {
  return {GraphFamily::ladder, rungs, std::nullopt, std::nullopt, 0};
}

std::string to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::erdos_renyi: return "erdos_renyi";
    case GraphFamily::barabasi_albert: return "barabasi_albert";
    case GraphFamily::binary_tree: return "binary_tree";
    case GraphFamily::ladder: return "ladder";
  }
  return "unknown";
}

void GeneratorSpec::validate() const {
  const auto name = to_string(family);
  if (family != GraphFamily::erdos_renyi && p_edge) {
    throw Error(name + " does not take an edge probability");
  }
  if (family != GraphFamily::barabasi_albert && m_attach) {
    throw Error(name + " does not take an attachment count");
  }
  switch (family) {
    case GraphFamily::erdos_renyi:
      if (!p_edge) throw Error("erdos_renyi requires p_edge");
      if (!(*p_edge > 0.0 && *p_edge <= 1.0)) throw Error("erdos_renyi p_edge must lie in (0, 1]");
      if (n < 2) throw Error("erdos_renyi needs n >= 2");
      break;
    case GraphFamily::barabasi_albert:
      if (!m_attach) throw Error("barabasi_albert requires m_attach");
      if (*m_attach < 1) throw Error("barabasi_albert m_attach must be >= 1");
      if (*m_attach >= n) throw Error("barabasi_albert requires m_attach < n");
      break;
    case GraphFamily::binary_tree:
      if (n < 1) throw Error("binary_tree height must be >= 1");
      if (n > 24) throw Error("binary_tree height too large for dense storage");
      break;
    case GraphFamily::ladder:
      if (n < 1) throw Error("ladder needs at least one rung");
      break;
  }
}

std::string GeneratorSpec::label() const {
  std::string out = to_string(family) + "(n=" + std::to_string(n);
  if (p_edge) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", *p_edge);
    out += ",p=";
    out += buf;
  }
  if (m_attach) out += ",m=" + std::to_string(*m_attach);
  return out + ")";
}

namespace {

bool has_isolated_vertex(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<bool> touched(n, false);
  for (const auto& e : edges) touched[e.u] = touched[e.v] = true;
  return std::find(touched.begin(), touched.end(), false) != touched.end();
}

Graph erdos_renyi(const GeneratorSpec& spec) {
  const double p = *spec.p_edge;
  for (int attempt = 0; attempt < kMaxRegenerationAttempts; ++attempt) {
    CounterRng rng(spec.seed, static_cast<std::uint32_t>(attempt));
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < spec.n; ++u) {
      for (std::size_t v = u + 1; v < spec.n; ++v) {
        if (rng.uniform() < p) edges.push_back({u, v, 1.0});
      }
    }
    if (!has_isolated_vertex(spec.n, edges)) return Graph(spec.n, std::move(edges));
  }
  throw Error("erdos_renyi: every one of " + std::to_string(kMaxRegenerationAttempts) +
              " attempts left an isolated vertex; p_edge is too small for n=" +
              std::to_string(spec.n));
}

Graph barabasi_albert(const GeneratorSpec& spec) {
  const std::size_t m = *spec.m_attach;
  std::vector<Edge> edges;
  std::vector<std::size_t> degree(spec.n, 0);
  for (std::size_t u = 0; u <= m; ++u) {
    for (std::size_t v = u + 1; v <= m; ++v) {
      edges.push_back({u, v, 1.0});
      ++degree[u];
      ++degree[v];
    }
  }
  CounterRng rng(spec.seed, 0);
  std::vector<std::size_t> targets;
  for (std::size_t fresh = m + 1; fresh < spec.n; ++fresh) {
    // Roulette wheel over existing vertices with weight k_i; duplicates redrawn.
    const std::size_t total = std::accumulate(degree.begin(), degree.begin() + fresh, std::size_t{0});
    targets.clear();
    while (targets.size() < m) {
      std::size_t ticket = rng.below(total);
      std::size_t pick = 0;
      while (ticket >= degree[pick]) ticket -= degree[pick++];
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) {
        targets.push_back(pick);
      }
    }
    for (auto t : targets) {
      edges.push_back({t, fresh, 1.0});
      ++degree[t];
      ++degree[fresh];
    }
  }
  return Graph(spec.n, std::move(edges));
}

Graph binary_tree(std::size_t height) {
  const std::size_t n = (std::size_t{1} << (height + 1)) - 1;
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t child = 1; child < n; ++child) edges.push_back({(child - 1) / 2, child, 1.0});
  return Graph(n, std::move(edges));
}

Graph ladder(std::size_t rungs) {
  // Rail A holds 0..n-1, rail B holds n..2n-1; rung i joins i and n+i.
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < rungs; ++i) {
    edges.push_back({i, rungs + i, 1.0});
    if (i + 1 < rungs) {
      edges.push_back({i, i + 1, 1.0});
      edges.push_back({rungs + i, rungs + i + 1, 1.0});
    }
  }
  return Graph(2 * rungs, std::move(edges));
}

}  // namespace

Graph generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case GraphFamily::erdos_renyi: return erdos_renyi(spec);
    case GraphFamily::barabasi_albert: return barabasi_albert(spec);
    case GraphFamily::binary_tree: return binary_tree(spec.n);
    case GraphFamily::ladder: return ladder(spec.n);
  }
  throw Error("unknown graph family");
}

}  // namespace grfkit
