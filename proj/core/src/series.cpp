#include "grfkit/series.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "grfkit/error.hpp"

namespace grfkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sum of a positive series from term `next` onward when the ratio of
// consecutive terms is at most `ratio` < 1 from there on.
double geometric_remainder(double next, double ratio) {
  if (next == 0.0) return 0.0;
  if (!(ratio < 1.0)) return kInf;
  return next / (1.0 - ratio);
}

PowerSeries diffusion_series(double t, std::size_t kmax) {
  PowerSeries s;
  s.coefficients.resize(kmax + 1);
  double term = std::exp(-t);  // e^-t t^k / k!
  for (std::size_t k = 0; k <= kmax; ++k) {
    s.coefficients[k] = term;
    term *= t / static_cast<double>(k + 1);
  }
  // Term ratios t/(k+1) decrease in k, so the next-term ratio test bounds the tail.
  s.tail_bound = geometric_remainder(term, t / static_cast<double>(kmax + 2));
  return s;
}

PowerSeries regularized_series(double scale, int d, std::size_t kmax) {
  const double rho = scale / (1.0 + scale);
  PowerSeries s;
  s.coefficients.resize(kmax + 1);
  double term = std::pow(1.0 + scale, -d);  // (1+s)^-d C(k+d-1, k) rho^k
  for (std::size_t k = 0; k <= kmax; ++k) {
    s.coefficients[k] = term;
    term *= rho * static_cast<double>(k + d) / static_cast<double>(k + 1);
  }
  // Ratio rho (k+d)/(k+1) is non-increasing in k for d >= 1.
  const double ratio = rho * static_cast<double>(kmax + 1 + d) / static_cast<double>(kmax + 2);
  s.tail_bound = geometric_remainder(term, ratio);
  return s;
}

PowerSeries inverse_cosine_series(std::size_t kmax) {
  // cos((1 - x) pi/4) = cos(a) cos(ax) + sin(a) sin(ax) with a = pi/4,
  // so alpha_k = (sqrt2/2) a^k / k! with signs + + - - + + ...
  constexpr double a = std::numbers::pi / 4.0;
  constexpr double half_sqrt2 = std::numbers::sqrt2 / 2.0;
  PowerSeries s;
  s.coefficients.resize(kmax + 1);
  double magnitude = half_sqrt2;
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double sign = (k % 4 < 2) ? 1.0 : -1.0;
    s.coefficients[k] = sign * magnitude;
    magnitude *= a / static_cast<double>(k + 1);
  }
  s.tail_bound = geometric_remainder(magnitude, a / static_cast<double>(kmax + 2));
  return s;
}

}  // namespace

std::string to_string(ModulationMode mode) {
  return mode == ModulationMode::symmetric ? "symmetric" : "asymmetric";
}

PowerSeries kernel_series(const KernelSpec& spec, std::size_t kmax) {
  spec.validate();
  if (kmax < 1) throw Error("kernel_series: Kmax must be >= 1");
  switch (spec.family()) {
    case KernelFamily::diffusion:
      return diffusion_series(std::get<DiffusionParams>(spec.params).t, kmax);
    case KernelFamily::regularized_laplacian: {
      const auto& p = std::get<RegularizedLaplacianParams>(spec.params);
      return regularized_series(p.s, p.d, kmax);
    }
    case KernelFamily::matern_laplacian: {
      const auto p = matern_laplacian_as_regularized(std::get<MaternLaplacianParams>(spec.params));
      return regularized_series(p.s, p.d, kmax);
    }
    case KernelFamily::inverse_cosine:
      return inverse_cosine_series(kmax);
    case KernelFamily::matern_distance:
      break;
  }
  throw Error("kernel_series: " + to_string(spec.family()) +
              " is defined on hop distances and has no power series in A~; use matern_laplacian");
}

ModulationMode default_modulation_mode(KernelFamily family) {
  return family == KernelFamily::inverse_cosine ? ModulationMode::asymmetric
                                                : ModulationMode::symmetric;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                             std::size_t length) {
  std::vector<double> out(length, 0.0);
  for (std::size_t k = 0; k < length; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j < a.size() && k - j < b.size()) acc += a[j] * b[k - j];
    }
    out[k] = acc;
  }
  return out;
}

ModulationSeries modulation_from_series(const PowerSeries& series, ModulationMode mode) {
  const auto& alpha = series.coefficients;
  if (alpha.empty()) throw Error("modulation_from_series: empty series");
  ModulationSeries out;
  out.mode = mode;
  if (mode == ModulationMode::asymmetric) {
    out.f1 = alpha;
    out.f2.assign(alpha.size(), 0.0);
    out.f2[0] = 1.0;
    return out;
  }

  if (!(alpha[0] > 0.0)) {
    throw Error("symmetric modulation needs alpha_0 > 0; use asymmetric mode");
  }
  std::vector<double> f(alpha.size(), 0.0);
  f[0] = std::sqrt(alpha[0]);
  for (std::size_t k = 1; k < alpha.size(); ++k) {
    double cross = 0.0;
    for (std::size_t j = 1; j < k; ++j) cross += f[j] * f[k - j];
    f[k] = (alpha[k] - cross) / (2.0 * f[0]);
    if (!std::isfinite(f[k])) {
      throw Error("symmetric modulation recursion diverged at k=" + std::to_string(k) +
                  "; use asymmetric mode");
    }
  }
  out.f1 = f;
  out.f2 = std::move(f);
  return out;
}

Matrix series_matrix(const Matrix& normalized_adjacency, std::span<const double> coefficients) {
  const auto n = normalized_adjacency.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = (normalized_adjacency * acc).eval();
    acc.diagonal().array() += *it;
  }
  return acc;
}

}  // namespace grfkit
