#include <gtest/gtest.h>

#include <numeric>

#include "grfkit/error.hpp"
#include "grfkit/generators.hpp"

namespace grfkit {
namespace {

std::size_t degree_sum(const Graph& g) {
  std::size_t s = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) s += g.degree(v);
  return s;
}

TEST(Ladder, ThreeRungs) {
  const auto g = generate(GeneratorSpec::ladder(3));
  EXPECT_EQ(g.num_vertices(), 6u);
  EXPECT_EQ(g.num_edges(), 7u);
}

TEST(Ladder, DegreeCounts) {
  for (std::size_t n = 2; n < 12; ++n) {
    const auto g = generate(GeneratorSpec::ladder(n));
    std::size_t two = 0, three = 0;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      (g.degree(v) == 2 ? two : three)++;
    }
    EXPECT_EQ(two, 4u);
    EXPECT_EQ(three, 2 * n - 4);
    EXPECT_EQ(g.num_edges(), 3 * n - 2);
  }
}

TEST(ErdosRenyi, CompleteWhenPIsOne) {
  const auto g = generate(GeneratorSpec::erdos_renyi(5, 1.0));
  EXPECT_EQ(g.num_edges(), 10u);
}

TEST(ErdosRenyi, ReproducibleAndNoIsolated) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto spec = GeneratorSpec::erdos_renyi(30, 0.1, seed);
    const auto a = generate(spec);
    const auto b = generate(spec);
    EXPECT_EQ(a.adjacency(), b.adjacency());
    for (std::size_t v = 0; v < a.num_vertices(); ++v) EXPECT_GE(a.degree(v), 1u);
    EXPECT_EQ(degree_sum(a), 2 * a.num_edges());
  }
  EXPECT_NE(generate(GeneratorSpec::erdos_renyi(30, 0.2, 1)).adjacency(),
            generate(GeneratorSpec::erdos_renyi(30, 0.2, 2)).adjacency());
}

TEST(ErdosRenyi, GivesUpWhenIsolationIsCertain) {
  EXPECT_THROW(generate(GeneratorSpec::erdos_renyi(40, 1e-9, 0)), Error);
}

TEST(BinaryTree, HeightThree) {
  const auto g = generate(GeneratorSpec::binary_tree(3));
  EXPECT_EQ(g.num_vertices(), 15u);
  EXPECT_EQ(g.num_edges(), 14u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(14), 1u);
}

TEST(BarabasiAlbert, EdgeCount) {
  const auto g = generate(GeneratorSpec::barabasi_albert(20, 2, 7));
  EXPECT_EQ(g.num_edges(), 37u);  // clique on 3 vertices + 17 * 2
  EXPECT_EQ(degree_sum(g), 74u);
}

TEST(BarabasiAlbert, MinimumDegreeIsM) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = generate(GeneratorSpec::barabasi_albert(25, 4, seed));
    EXPECT_EQ(g.num_edges(), 10u + 20u * 4u);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_GE(g.degree(v), 4u);
  }
}

TEST(GeneratorSpec, RejectsBadParameters) {
  EXPECT_THROW(GeneratorSpec::erdos_renyi(1, 0.5).validate(), Error);
  EXPECT_THROW(GeneratorSpec::erdos_renyi(5, 0.0).validate(), Error);
  EXPECT_THROW(GeneratorSpec::erdos_renyi(5, 1.5).validate(), Error);
  EXPECT_THROW(GeneratorSpec::barabasi_albert(5, 0).validate(), Error);
  EXPECT_THROW(GeneratorSpec::barabasi_albert(5, 5).validate(), Error);
  EXPECT_THROW(GeneratorSpec::ladder(0).validate(), Error);
  EXPECT_THROW(GeneratorSpec::binary_tree(0).validate(), Error);
}

}  // namespace
}  // namespace grfkit
