#include "grfkit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "grfkit/error.hpp"

namespace grfkit {

Graph::Graph(std::size_t num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  if (num_vertices_ == 0) throw Error("graph must have at least one vertex");

  for (auto& e : edges_) {
    if (e.u >= num_vertices_ || e.v >= num_vertices_) {
      throw Error("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                  ") references a vertex outside [0, " +
                  std::to_string(num_vertices_) + ")");
    }
    if (e.u == e.v) throw Error("self-loop at vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                  ") has non-positive weight");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw Error("duplicate edge (" + std::to_string(edges_[i].u) + ", " +
                  std::to_string(edges_[i].v) + ")");
    }
  }

  adjacency_ = Matrix::Zero(num_vertices_, num_vertices_);
  std::vector<std::size_t> counts(num_vertices_, 0);
  for (const auto& e : edges_) {
    adjacency_(e.u, e.v) = e.weight;
    adjacency_(e.v, e.u) = e.weight;
    ++counts[e.u];
    ++counts[e.v];
  }
  for (std::size_t v = 0; v < num_vertices_; ++v) {
    if (counts[v] == 0) throw Error("vertex " + std::to_string(v) + " is isolated");
  }

  offsets_.assign(num_vertices_ + 1, 0);
  for (std::size_t v = 0; v < num_vertices_; ++v) offsets_[v + 1] = offsets_[v] + counts[v];
  neighbor_index_.resize(offsets_.back());
  neighbor_weight_.resize(offsets_.back());
  weighted_degree_.assign(num_vertices_, 0.0);
  // Row-major scan of W keeps each neighbor list sorted by index.
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t u = 0; u < num_vertices_; ++u) {
    for (std::size_t v = 0; v < num_vertices_; ++v) {
      const double w = adjacency_(u, v);
      if (w == 0.0) continue;
      neighbor_index_[fill[u]] = v;
      neighbor_weight_[fill[u]] = w;
      ++fill[u];
      weighted_degree_[u] += w;
    }
  }
}

std::span<const std::size_t> Graph::neighbors(std::size_t v) const noexcept {
  return {neighbor_index_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const double> Graph::neighbor_weights(std::size_t v) const noexcept {
  return {neighbor_weight_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t Graph::degree(std::size_t v) const noexcept {
  return offsets_[v + 1] - offsets_[v];
}

NormalizedLaplacian normalized_laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Vector inv_sqrt_degree(n);
  for (Eigen::Index v = 0; v < n; ++v) {
    inv_sqrt_degree(v) = 1.0 / std::sqrt(g.weighted_degree(static_cast<std::size_t>(v)));
  }
  NormalizedLaplacian out;
  out.adjacency = inv_sqrt_degree.asDiagonal() * g.adjacency() * inv_sqrt_degree.asDiagonal();
  // Enforce exact symmetry; the diagonal scaling can differ in the last ulp.
  out.adjacency = 0.5 * (out.adjacency + out.adjacency.transpose()).eval();
  out.laplacian = Matrix::Identity(n, n) - out.adjacency;
  return out;
}

EdgeListResult load_edge_list(std::istream& in) {
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, std::size_t> seen;  // packed (u, v) -> edge slot
  std::size_t duplicates = 0;

  auto vertex_for = [&](const std::string& token) {
    auto [it, inserted] = index_of.emplace(token, labels.size());
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string a, b, w_token, extra;
    fields >> a >> b;
    const auto where = " at line " + std::to_string(line_no);
    if (b.empty()) throw Error("unparseable edge line" + where + ": '" + line + "'");
    double weight = 1.0;
    if (fields >> w_token) {
      std::size_t used = 0;
      try {
        weight = std::stod(w_token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != w_token.size()) {
        throw Error("unparseable weight '" + w_token + "'" + where);
      }
      if (fields >> extra) throw Error("unexpected trailing field '" + extra + "'" + where);
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw Error("non-positive weight" + where);
    }
    if (a == b) throw Error("self-loop" + where);

    auto u = vertex_for(a);
    auto v = vertex_for(b);
    if (u > v) std::swap(u, v);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (seen.contains(key)) {
      ++duplicates;
      continue;
    }
    seen.emplace(key, edges.size());
    edges.push_back({u, v, weight});
  }
  if (labels.empty()) throw Error("edge list contains no edges");

  return {Graph(labels.size(), std::move(edges)), std::move(labels), duplicates};
}

EdgeListResult load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path.string() + "'");
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  char buf[64];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << e.u << ' ' << e.v << ' ' << buf << '\n';
  }
}

}  // namespace grfkit
