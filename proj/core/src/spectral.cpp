#include "grfkit/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <queue>

#include "grfkit/error.hpp"

namespace grfkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kSymmetryTolerance = 1e-10;

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::diffusion: return "diffusion";
    case KernelFamily::regularized_laplacian: return "regularized_laplacian";
    case KernelFamily::matern_distance: return "matern_distance";
    case KernelFamily::matern_laplacian: return "matern_laplacian";
    case KernelFamily::inverse_cosine: return "inverse_cosine";
  }
  return "unknown";
}

KernelFamily KernelSpec::family() const noexcept {
  return std::visit(overloaded{
                        [](const DiffusionParams&) { return KernelFamily::diffusion; },
                        [](const RegularizedLaplacianParams&) { return KernelFamily::regularized_laplacian; },
                        [](const MaternDistanceParams&) { return KernelFamily::matern_distance; },
                        [](const MaternLaplacianParams&) { return KernelFamily::matern_laplacian; },
                        [](const InverseCosineParams&) { return KernelFamily::inverse_cosine; },
                    },
                    params);
}

void KernelSpec::validate() const {
  std::visit(overloaded{
                 [](const DiffusionParams& p) {
                   if (!(p.t >= 0.0) || !std::isfinite(p.t)) throw Error("diffusion t must be >= 0");
                 },
                 [](const RegularizedLaplacianParams& p) {
                   if (!(p.s > 0.0) || !std::isfinite(p.s)) throw Error("regularized_laplacian s must be > 0");
                   if (p.d < 1) throw Error("regularized_laplacian d must be a positive integer");
                 },
                 [](const MaternDistanceParams& p) {
                   if (!(p.l > 0.0)) throw Error("matern l must be > 0");
                   if (!(p.nu > 0.0) || !is_integer(p.nu - 0.5)) {
                     throw Error("matern_distance nu must be a half-integer k + 1/2");
                   }
                 },
                 [](const MaternLaplacianParams& p) {
                   if (!(p.l > 0.0)) throw Error("matern l must be > 0");
                   if (!(p.nu >= 1.0) || !is_integer(p.nu)) {
                     throw Error("matern_laplacian needs an integer power d = nu >= 1, got nu=" +
                                 format_number(p.nu));
                   }
                 },
                 [](const InverseCosineParams&) {},
             },
             params);
}

std::string KernelSpec::label() const {
  return std::visit(
      overloaded{
          [](const DiffusionParams& p) { return "diffusion(t=" + format_number(p.t) + ")"; },
          [](const RegularizedLaplacianParams& p) {
            return "regularized_laplacian(s=" + format_number(p.s) + ",d=" + std::to_string(p.d) + ")";
          },
          [](const MaternDistanceParams& p) {
            return "matern_distance(nu=" + format_number(p.nu) + ",l=" + format_number(p.l) + ")";
          },
          [](const MaternLaplacianParams& p) {
            return "matern_laplacian(nu=" + format_number(p.nu) + ",l=" + format_number(p.l) + ")";
          },
          [](const InverseCosineParams&) { return std::string("inverse_cosine"); },
      },
      params);
}

RegularizedLaplacianParams matern_laplacian_as_regularized(const MaternLaplacianParams& p) {
  return {p.l * p.l / (2.0 * p.nu), static_cast<int>(p.nu)};
}

Eigendecomposition eigh(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error("eigh: matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error("eigh: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw Error("eigh: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double matern_value(double r, double nu, double l) {
  if (!(r >= 0.0)) throw Error("matern_value: distance must be >= 0");
  if (!(l > 0.0)) throw Error("matern_value: l must be > 0");
  if (!(nu > 0.0) || !is_integer(nu - 0.5)) throw Error("matern_value: nu must be k + 1/2");
  const int k = static_cast<int>(nu - 0.5);
  const double root = std::sqrt(2.0 * k + 1.0);
  const double x = 2.0 * root * r / l;
  // k!/(2k)! * (k+i)!/(i!(k-i)!) built incrementally in i to stay finite.
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c *= static_cast<double>(j) / (k + j);  // k!/(2k)! * k!
    for (int j = 1; j <= i; ++j) c *= static_cast<double>(k + j) / j;       // (k+i)!/(k! i!)
    for (int j = 1; j <= k - i; ++j) c /= j;                                // 1/(k-i)!
    // c now holds k!/(2k)! * (k+i)!/(i!(k-i)!) (the k! factors cancel).
    sum += c * std::pow(x, k - i);
  }
  return std::exp(-root * r / l) * sum;
}

Eigen::MatrixXi bfs_distances(const Graph& g) {
  const auto n = g.num_vertices();
  Eigen::MatrixXi dist = Eigen::MatrixXi::Constant(n, n, -1);
  std::queue<std::size_t> frontier;
  for (std::size_t src = 0; src < n; ++src) {
    dist(src, src) = 0;
    frontier.push(src);
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop();
      for (auto v : g.neighbors(u)) {
        if (dist(src, v) < 0) {
          dist(src, v) = dist(src, u) + 1;
          frontier.push(v);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (dist(src, v) < 0) {
        throw Error("graph is disconnected: vertices " + std::to_string(src) + " and " +
                    std::to_string(v) + " lie in different components");
      }
    }
  }
  return dist;
}

KernelMatrix exact_kernel(const NormalizedLaplacian& laplacian, const KernelSpec& spec,
                          const Graph& g) {
  spec.validate();
  if (spec.family() == KernelFamily::matern_distance) {
    const auto& p = std::get<MaternDistanceParams>(spec.params);
    const auto dist = bfs_distances(g);
    Matrix k(dist.rows(), dist.cols());
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      for (Eigen::Index j = 0; j < k.cols(); ++j) k(i, j) = matern_value(dist(i, j), p.nu, p.l);
    }
    return {std::move(k), spec};
  }

  const auto eig = eigh(laplacian.laplacian);
  auto regularized = [&eig](RegularizedLaplacianParams p) {
    return spectral_apply(eig, [p](double lambda) { return std::pow(1.0 + p.s * lambda, -p.d); });
  };
  Matrix k = std::visit(
      overloaded{
          [&](const DiffusionParams& p) {
            return spectral_apply(eig, [t = p.t](double lambda) { return std::exp(-t * lambda); });
          },
          [&](const RegularizedLaplacianParams& p) { return regularized(p); },
          [&](const MaternLaplacianParams& p) { return regularized(matern_laplacian_as_regularized(p)); },
          [&](const InverseCosineParams&) {
            return spectral_apply(eig, [](double lambda) { return std::cos(lambda * std::numbers::pi / 4.0); });
          },
          [&](const MaternDistanceParams&) -> Matrix { throw Error("unreachable"); },
      },
      spec.params);
  k = 0.5 * (k + k.transpose()).eval();
  return {std::move(k), spec};
}

KernelMatrix exact_kernel(const Graph& g, const KernelSpec& spec) {
  return exact_kernel(normalized_laplacian(g), spec, g);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace grfkit
