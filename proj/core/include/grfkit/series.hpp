#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "grfkit/graph.hpp"
#include "grfkit/spectral.hpp"

namespace grfkit {

inline constexpr std::size_t kDefaultKmax = 50;

/// Truncated power series in the normalized adjacency A~.
///
/// tail_bound overestimates |sum_{k>Kmax} alpha_k x^k| on x in [-1, 1];
/// since the spectrum of A~ lies in [-1, 1] it also bounds the spectral
/// norm of the matrix remainder.
struct PowerSeries {
  std::vector<double> coefficients;
  double tail_bound = 0.0;

  std::size_t truncation_order() const noexcept { return coefficients.size() - 1; }
};

enum class ModulationMode { symmetric, asymmetric };

/// Load weights per walk length for the two walker ensembles.
/// Invariant: (f1 * f2)_k == alpha_k for k <= Kmax.
struct ModulationSeries {
  std::vector<double> f1;
  std::vector<double> f2;
  ModulationMode mode = ModulationMode::asymmetric;

  std::size_t truncation_order() const noexcept { return f1.size() - 1; }
};

/// Series of a Laplacian-spectral kernel after substituting L~ = I - A~.
/// Throws for matern_distance, which has no such series.
PowerSeries kernel_series(const KernelSpec& spec, std::size_t kmax = kDefaultKmax);

/// Symmetric mode takes the convolution square root of alpha.
/// Throws if alpha_0 <= 0 or the recursion leaves the finite range.
ModulationSeries modulation_from_series(const PowerSeries& series, ModulationMode mode);

/// Diffusion and regularized families default to symmetric roots, the
/// mixed-sign inverse cosine to asymmetric.
ModulationMode default_modulation_mode(KernelFamily family);

/// First `length` terms of the discrete convolution a * b.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                             std::size_t length);

/// sum_k c_k A~^k by Horner's rule.
Matrix series_matrix(const Matrix& normalized_adjacency, std::span<const double> coefficients);

std::string to_string(ModulationMode mode);

}  // namespace grfkit
