#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "grfkit/graph.hpp"

namespace grfkit {

enum class KernelFamily {
  diffusion,
  regularized_laplacian,
  matern_distance,
  matern_laplacian,
  inverse_cosine,
};

std::string to_string(KernelFamily family);

/// exp(-t L~).
struct DiffusionParams {
  double t = 0.5;
};

/// (I + s L~)^(-d).
struct RegularizedLaplacianParams {
  double s = 1.0;
  int d = 2;
};

/// Half-integer Matern covariance of hop distance, nu = k + 1/2.
struct MaternDistanceParams {
  double nu = 2.5;
  double l = 1.0;
};

/// (I + s L~)^(-d) with s = l^2 / (2 nu), d = nu. Integer nu only.
struct MaternLaplacianParams {
  double nu = 2.0;
  double l = 1.0;
};

/// cos(L~ pi / 4).
struct InverseCosineParams {};

/// Tagged kernel description. The variant guarantees exactly one family's
/// parameters are present.
struct KernelSpec {
  std::variant<DiffusionParams, RegularizedLaplacianParams, MaternDistanceParams,
               MaternLaplacianParams, InverseCosineParams>
      params;

  static KernelSpec diffusion(double t) { return {DiffusionParams{t}}; }
  static KernelSpec regularized_laplacian(double s, int d) { return {RegularizedLaplacianParams{s, d}}; }
  static KernelSpec matern_distance(double nu, double l) { return {MaternDistanceParams{nu, l}}; }
  static KernelSpec matern_laplacian(double nu, double l) { return {MaternLaplacianParams{nu, l}}; }
  static KernelSpec inverse_cosine() { return {InverseCosineParams{}}; }

  KernelFamily family() const noexcept;
  void validate() const;
  std::string label() const;
};

/// The (s, d) pair a Matern-Laplacian spec resolves to.
RegularizedLaplacianParams matern_laplacian_as_regularized(const MaternLaplacianParams& p);

struct KernelMatrix {
  Matrix matrix;
  KernelSpec spec;
};

struct Eigendecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
};

/// Dense symmetric eigendecomposition. Throws on non-symmetric input.
Eigendecomposition eigh(const Matrix& m);

/// U f(Lambda) U^T for a scalar function f.
template <typename F>
Matrix spectral_apply(const Eigendecomposition& eig, F&& f) {
  Vector mapped = eig.values.unaryExpr(std::forward<F>(f));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

/// Ground-truth kernel matrix. `g` supplies hop distances for matern_distance.
KernelMatrix exact_kernel(const NormalizedLaplacian& laplacian, const KernelSpec& spec,
                          const Graph& g);
KernelMatrix exact_kernel(const Graph& g, const KernelSpec& spec);

/// Half-integer Matern covariance as the product of an exponential and a
/// degree-k polynomial.
double matern_value(double r, double nu, double l);

/// All-pairs hop counts by repeated BFS. Throws if g is disconnected.
Eigen::MatrixXi bfs_distances(const Graph& g);

/// Row-major CSV with 17 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace grfkit
