#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "grfkit/error.hpp"
#include "grfkit/generators.hpp"
#include "grfkit/spectral.hpp"
#include "oracles/path_search.hpp"

namespace grfkit {
namespace {

Graph k2() { return Graph(2, {{0, 1, 1.0}}); }

Matrix mat2(double a, double b) {
  Matrix m(2, 2);
  m << a, b, b, a;
  return m;
}

TEST(Eigh, TwoByTwo) {
  Matrix m = mat2(1, -1);
  const auto e = eigh(m);
  EXPECT_NEAR(e.values(0), 0.0, 1e-15);
  EXPECT_NEAR(e.values(1), 2.0, 1e-15);
  EXPECT_TRUE((e.vectors.transpose() * e.vectors).isIdentity(1e-14));
}

TEST(Eigh, IdentityAndDiagonal) {
  const auto e = eigh(Matrix::Identity(3, 3));
  EXPECT_TRUE(e.values.isApprox(Vector::Ones(3)));
  EXPECT_TRUE((e.vectors.transpose() * e.vectors).isIdentity(1e-14));
  Vector d(3);
  d << 3, 1, 2;
  const auto f = eigh(Matrix(d.asDiagonal()));
  EXPECT_DOUBLE_EQ(f.values(0), 1.0);
  EXPECT_DOUBLE_EQ(f.values(1), 2.0);
  EXPECT_DOUBLE_EQ(f.values(2), 3.0);
}

TEST(Eigh, Reconstructs) {
  const auto nl = normalized_laplacian(generate(GeneratorSpec::erdos_renyi(12, 0.4, 3)));
  const auto e = eigh(nl.laplacian);
  const Matrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
  EXPECT_LT((back - nl.laplacian).norm(), 1e-12);
}

TEST(Eigh, RejectsNonSymmetric) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(eigh(m), Error);
  EXPECT_THROW(eigh(Matrix::Zero(2, 3)), Error);
}

TEST(ExactKernel, K2Diffusion) {
  const auto k = exact_kernel(k2(), KernelSpec::diffusion(0.5)).matrix;
  const double e = std::exp(-1.0);
  EXPECT_TRUE(k.isApprox(mat2((1 + e) / 2, (1 - e) / 2), 1e-14));
  EXPECT_NEAR(k(0, 0), 0.683940, 1e-6);
}

TEST(ExactKernel, K2Regularized) {
  const auto k = exact_kernel(k2(), KernelSpec::regularized_laplacian(1.0, 2)).matrix;
  EXPECT_TRUE(k.isApprox(mat2(5.0 / 9, 4.0 / 9), 1e-14));
}

TEST(ExactKernel, K2InverseCosine) {
  const auto k = exact_kernel(k2(), KernelSpec::inverse_cosine()).matrix;
  EXPECT_LT((k - mat2(0.5, 0.5)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ExactKernel, MaternLaplacianIsRegularizedForm) {
  const auto g = generate(GeneratorSpec::ladder(4));
  const auto a = exact_kernel(g, KernelSpec::matern_laplacian(3.0, 2.0)).matrix;
  const auto b = exact_kernel(g, KernelSpec::regularized_laplacian(4.0 / 6.0, 3)).matrix;
  EXPECT_LT((a - b).norm(), 1e-14);
  EXPECT_THROW(exact_kernel(g, KernelSpec::matern_laplacian(2.5, 1.0)), Error);
}

TEST(ExactKernel, DiffusionAtZeroIsIdentity) {
  const auto g = generate(GeneratorSpec::barabasi_albert(15, 3, 1));
  EXPECT_TRUE(exact_kernel(g, KernelSpec::diffusion(0.0)).matrix.isIdentity(1e-12));
}

TEST(ExactKernel, DiffusionSemigroup) {
  const auto g = generate(GeneratorSpec::erdos_renyi(10, 0.5, 2));
  const auto a = exact_kernel(g, KernelSpec::diffusion(0.3)).matrix;
  const auto b = exact_kernel(g, KernelSpec::diffusion(0.4)).matrix;
  const auto c = exact_kernel(g, KernelSpec::diffusion(0.7)).matrix;
  EXPECT_LT((a * b - c).norm(), 1e-12);
}

TEST(ExactKernel, RegularizedPowerComposes) {
  const auto g = generate(GeneratorSpec::binary_tree(2));
  const auto one = exact_kernel(g, KernelSpec::regularized_laplacian(0.7, 1)).matrix;
  const auto three = exact_kernel(g, KernelSpec::regularized_laplacian(0.7, 3)).matrix;
  EXPECT_LT((one * one * one - three).norm(), 1e-12);
  // (I + s L) K = I for d = 1.
  const auto nl = normalized_laplacian(g);
  const Matrix id = (Matrix::Identity(7, 7) + 0.7 * nl.laplacian) * one;
  EXPECT_TRUE(id.isIdentity(1e-12));
}

TEST(ExactKernel, PositiveSemidefinite) {
  const auto g = generate(GeneratorSpec::erdos_renyi(14, 0.3, 5));
  for (const auto& spec : {KernelSpec::diffusion(1.3), KernelSpec::regularized_laplacian(2.0, 2),
                           KernelSpec::matern_laplacian(2.0, 1.0)}) {
    const auto k = exact_kernel(g, spec).matrix;
    EXPECT_EQ(k, k.transpose()) << spec.label();
    EXPECT_GE(eigh(k).values(0), -1e-12) << spec.label();
  }
}

TEST(ExactKernel, MaternDistanceUsesHopDistance) {
  const auto g = generate(GeneratorSpec::ladder(5));
  const auto k = exact_kernel(g, KernelSpec::matern_distance(1.5, 0.8)).matrix;
  const auto d = bfs_distances(g);
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      EXPECT_DOUBLE_EQ(k(i, j), matern_value(d(i, j), 1.5, 0.8));
    }
  }
}

TEST(KernelSpec, Validation) {
  EXPECT_THROW(KernelSpec::diffusion(-0.1).validate(), Error);
  EXPECT_THROW(KernelSpec::regularized_laplacian(0.0, 2).validate(), Error);
  EXPECT_THROW(KernelSpec::regularized_laplacian(1.0, 0).validate(), Error);
  EXPECT_THROW(KernelSpec::matern_distance(2.0, 1.0).validate(), Error);
  EXPECT_THROW(KernelSpec::matern_distance(2.5, 0.0).validate(), Error);
  EXPECT_NO_THROW(KernelSpec::matern_distance(0.5, 1.0).validate());
  EXPECT_EQ(KernelSpec::regularized_laplacian(1.0, 2).label(), "regularized_laplacian(s=1,d=2)");
}

TEST(Matern, AtZeroIsOne) {
  for (double nu : {0.5, 1.5, 2.5, 7.5}) EXPECT_DOUBLE_EQ(matern_value(0.0, nu, 1.3), 1.0);
}

TEST(Matern, ClosedFormNuTwoAndHalf) {
  const double s5 = std::sqrt(5.0);
  EXPECT_NEAR(matern_value(1.0, 2.5, 1.0), std::exp(-s5) * (8.0 + 3.0 * s5) / 3.0, 1e-15);
}

// Reference values from an independent 50-digit evaluation of the
// Bessel-function form 2^(1-nu)/Gamma(nu) (sqrt(2nu) r/l)^nu K_nu(sqrt(2nu) r/l).
TEST(Matern, AgainstBesselForm) {
  EXPECT_NEAR(matern_value(1.0, 2.5, 1.0), 0.5239941088318203, 1e-14);
  EXPECT_NEAR(matern_value(2.0, 1.5, 0.7), 0.04219130611447533, 1e-14);
  EXPECT_NEAR(matern_value(1.5, 3.5, 2.0), 0.6983997136086832, 1e-14);
  // nu = 1/2 is the exponential kernel.
  EXPECT_NEAR(matern_value(2.0, 0.5, 1.5), std::exp(-2.0 / 1.5), 1e-15);
}

TEST(Matern, DecreasesToZero) {
  double prev = 1.0;
  for (int r = 1; r <= 60; ++r) {
    const double v = matern_value(r, 2.5, 1.0);
    EXPECT_LT(v, prev);
    EXPECT_GE(v, 0.0);
    prev = v;
  }
  EXPECT_LT(prev, 1e-40);
}

TEST(Bfs, PathAndTriangle) {
  const auto p3 = bfs_distances(Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
  Eigen::MatrixXi expected(3, 3);
  expected << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  EXPECT_EQ(p3, expected);
  const auto k3 = bfs_distances(Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}));
  EXPECT_EQ(k3, Eigen::MatrixXi::Ones(3, 3) - Eigen::MatrixXi::Identity(3, 3));
}

TEST(Bfs, LadderCornerAgainstExhaustiveSearch) {
  const auto g = generate(GeneratorSpec::ladder(3));
  const auto d = bfs_distances(g);
  EXPECT_EQ(d(0, 5), 3);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_EQ(static_cast<std::size_t>(d(i, j)), oracle::shortest_simple_path(g, i, j));
    }
  }
}

TEST(Bfs, DisconnectedGraphNamesPair) {
  const Graph g(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  try {
    bfs_distances(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("disconnected"), std::string::npos);
  }
}

}  // namespace
}  // namespace grfkit
