#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace grfkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Undirected weighted graph without self-loops or isolated vertices.
///
/// Edges are stored with u < v, sorted lexicographically. Construction
/// validates every invariant and throws grfkit::Error on violation, so a
/// Graph value is always usable for normalized-Laplacian work.
class Graph {
 public:
  Graph(std::size_t num_vertices, std::vector<Edge> edges);

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Dense symmetric adjacency W with zero diagonal.
  const Matrix& adjacency() const noexcept { return adjacency_; }

  std::span<const std::size_t> neighbors(std::size_t v) const noexcept;
  std::span<const double> neighbor_weights(std::size_t v) const noexcept;

  /// Number of incident edges.
  std::size_t degree(std::size_t v) const noexcept;
  /// Sum of incident edge weights, D_vv.
  double weighted_degree(std::size_t v) const noexcept { return weighted_degree_[v]; }

 private:
  std::size_t num_vertices_;
  std::vector<Edge> edges_;
  Matrix adjacency_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> neighbor_index_;
  std::vector<double> neighbor_weight_;
  std::vector<double> weighted_degree_;
};

/// L~ = D^(-1/2) (D - W) D^(-1/2) and the normalized adjacency A~ = I - L~.
struct NormalizedLaplacian {
  Matrix laplacian;
  Matrix adjacency;
};

NormalizedLaplacian normalized_laplacian(const Graph& g);

struct EdgeListResult {
  Graph graph;
  /// Original token of each dense vertex index, in first-appearance order.
  std::vector<std::string> labels;
  /// Repeated undirected pairs that were dropped (first weight kept).
  std::size_t duplicates_dropped = 0;
};

/// Parses "u v [w]" lines; '#' starts a comment line.
EdgeListResult load_edge_list(std::istream& in);
EdgeListResult load_edge_list(const std::filesystem::path& path);

/// Writes "u v w" lines sorted by (u, v), readable by load_edge_list.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace grfkit
