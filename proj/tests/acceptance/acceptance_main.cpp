// Acceptance suite: one PASS/FAIL line per criterion.
//
//   grfkit_acceptance                 run criteria 1-9
//   grfkit_acceptance --criterion N   run one criterion
//
// Exit status is 0 only if every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "grfkit/experiment.hpp"
#include "grfkit/generators.hpp"
#include "grfkit/series.hpp"
#include "grfkit/spectral.hpp"
#include "grfkit/walks.hpp"
#include "oracles/stats.hpp"
#include "oracles/walk_enumeration.hpp"

namespace {

using namespace grfkit;

// Pinned tolerances and protocol constants.
constexpr double kClosedFormTol = 1e-9;
constexpr double kIdentityTol = 1e-12;
constexpr double kSeriesRelTol = 1e-8;
constexpr double kModulationTol = 1e-12;
constexpr double kOracleTol = 1e-10;
constexpr double kStandardErrors = 3.0;
constexpr double kAlpha = 0.01;
constexpr double kLadderSeedFraction = 0.60;
constexpr double kWinRateBand = 0.15;
constexpr double kWinRateEr = 0.58;
constexpr double kWinRateBa = 0.44;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [x]");
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Graph k2() { return Graph(2, {{0, 1, 1.0}}); }
Graph p3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }
Graph k3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

std::vector<KernelSpec> estimable_defaults() {
  return {KernelSpec::diffusion(0.5), KernelSpec::regularized_laplacian(1.0, 2),
          KernelSpec::matern_laplacian(2.0, 1.0), KernelSpec::inverse_cosine()};
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// 1. Closed forms on K2 and the t=0 identity.
Outcome closed_forms() {
  Outcome o;
  const double e = std::exp(-1.0);
  auto check = [&](const KernelSpec& spec, double diag, double off) {
    Matrix want(2, 2);
    want << diag, off, off, diag;
    const double err = max_abs(exact_kernel(k2(), spec).matrix - want);
    note(o, err <= kClosedFormTol, fmt("%s err=%.1e", spec.label().c_str(), err));
  };
  check(KernelSpec::diffusion(0.5), (1 + e) / 2, (1 - e) / 2);
  check(KernelSpec::regularized_laplacian(1.0, 2), 5.0 / 9.0, 4.0 / 9.0);
  check(KernelSpec::inverse_cosine(), 0.5, 0.5);
  double worst = 0.0;
  for (const auto& g : {k2(), k3(), generate(GeneratorSpec::ladder(5)),
                        generate(GeneratorSpec::erdos_renyi(20, 0.3, 1))}) {
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    worst = std::max(worst, max_abs(exact_kernel(g, KernelSpec::diffusion(0.0)).matrix -
                                    Matrix::Identity(n, n)));
  }
  note(o, worst <= kIdentityTol, fmt("diffusion(t=0) vs I err=%.1e", worst));
  return o;
}

// 2. Truncated series against the spectral kernel on random ER(10, 0.5).
Outcome series_fidelity() {
  Outcome o;
  for (const auto& spec : estimable_defaults()) {
    double worst = 0.0;
    const auto series = kernel_series(spec, kDefaultKmax);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = generate(GeneratorSpec::erdos_renyi(10, 0.5, seed));
      const auto nl = normalized_laplacian(g);
      const Matrix exact = exact_kernel(nl, spec, g).matrix;
      const Matrix approx = series_matrix(nl.adjacency, series.coefficients);
      worst = std::max(worst, (approx - exact).norm() / exact.norm());
    }
    note(o, worst <= kSeriesRelTol, fmt("%s rel=%.1e", spec.label().c_str(), worst));
  }
  return o;
}

// 3. Convolution identity and closed-form square roots.
Outcome modulation() {
  Outcome o;
  double worst = 0.0;
  for (const auto& spec : estimable_defaults()) {
    const auto s = kernel_series(spec, kDefaultKmax);
    for (auto mode : {ModulationMode::symmetric, ModulationMode::asymmetric}) {
      const auto m = modulation_from_series(s, mode);
      const auto c = convolve(m.f1, m.f2, s.coefficients.size());
      for (std::size_t k = 0; k < c.size(); ++k) worst = std::max(worst, std::abs(c[k] - s.coefficients[k]));
    }
  }
  note(o, worst <= kModulationTol, fmt("convolution identity max=%.1e", worst));

  // Geometric: alpha_k = (1+s)^-2 (k+1) rho^k has root f_k = (1+s)^-1 rho^k.
  double geo = 0.0;
  {
    const double s = 1.0, rho = s / (1 + s);
    const auto m = modulation_from_series(kernel_series(KernelSpec::regularized_laplacian(s, 2), kDefaultKmax),
                                          ModulationMode::symmetric);
    for (std::size_t k = 0; k < m.f1.size(); ++k) {
      geo = std::max(geo, std::abs(m.f1[k] - std::pow(rho, static_cast<double>(k)) / (1 + s)));
    }
  }
  note(o, geo <= kModulationTol, fmt("geometric root max=%.1e", geo));

  // Poisson(t) has root Poisson-shaped e^(-t/2) (t/2)^k / k!.
  double poisson = 0.0;
  for (double t : {0.5, 2.0}) {
    const auto m = modulation_from_series(kernel_series(KernelSpec::diffusion(t), 20), ModulationMode::symmetric);
    for (std::size_t k = 0; k < m.f1.size(); ++k) {
      const double want = std::exp(-t / 2 + static_cast<double>(k) * std::log(t / 2) -
                                   std::lgamma(static_cast<double>(k) + 1.0));
      poisson = std::max(poisson, std::abs(m.f1[k] - want));
    }
  }
  note(o, poisson <= kModulationTol, fmt("half-Poisson root max=%.1e", poisson));
  return o;
}

// 4. E[K^] against exhaustive enumeration; Monte Carlo mean against the truncated target.
Outcome unbiasedness() {
  Outcome o;
  constexpr std::size_t kmax = 6;
  constexpr std::size_t seeds = 100000;
  const auto spec = KernelSpec::diffusion(0.5);
  const auto series = kernel_series(spec, kmax);
  const auto mod = modulation_from_series(series, ModulationMode::symmetric);
  for (const auto& [name, g] : {std::pair{"P3", p3()}, std::pair{"K3", k3()}}) {
    const Matrix enumerated = oracle::expected_estimate(g, mod.f1, mod.f2, 0.5);
    const double gap = max_abs(enumerated - expected_kernel(g, mod));
    note(o, gap <= kOracleTol, fmt("%s oracle gap=%.1e", name, gap));

    const Matrix target = series_matrix(normalized_laplacian(g).adjacency, series.coefficients);
    for (auto coupling : {Coupling::iid, Coupling::antithetic}) {
      Matrix sum = Matrix::Zero(3, 3), sum_sq = Matrix::Zero(3, 3);
      for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        const Matrix k = estimate_kernel(g, mod, {2, 0.5, coupling, seed, 0}).matrix;
        sum += k;
        sum_sq += k.cwiseProduct(k);
      }
      const Matrix mean = sum / static_cast<double>(seeds);
      const Matrix var = (sum_sq / static_cast<double>(seeds) - mean.cwiseProduct(mean)) *
                         (static_cast<double>(seeds) / (seeds - 1.0));
      double worst_z = 0.0;
      for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
          const double se = std::sqrt(var(i, j) / static_cast<double>(seeds));
          worst_z = std::max(worst_z, std::abs(mean(i, j) - target(i, j)) / se);
        }
      }
      note(o, worst_z <= kStandardErrors,
           fmt("%s %s max|z|=%.2f", name, to_string(coupling).c_str(), worst_z));
    }
  }
  return o;
}

// 5. Antithetic pairs, TRV uniformity, Geometric(0.5) walk lengths.
Outcome coupling() {
  Outcome o;
  const auto g = generate(GeneratorSpec::ladder(5));
  const WalkTable table(g, 0.5);

  std::size_t violations = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const WalkerDraws a(seed, {0, 0, Ensemble::first}, Coupling::antithetic);
    const WalkerDraws b(seed, {0, 1, Ensemble::first}, Coupling::antithetic);
    const bool a0 = sample_walk(table, 0, a, 1000).length == 0;
    const bool b0 = sample_walk(table, 0, b, 1000).length == 0;
    if (a0 == b0) ++violations;
  }
  note(o, violations == 0, fmt("pairs with !=1 step-0 termination: %zu/10000", violations));

  std::vector<double> trvs;
  trvs.reserve(100000);
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const WalkerDraws odd(seed, {0, 1, Ensemble::first}, Coupling::antithetic);
    for (std::uint32_t step = 0; step < 10; ++step) trvs.push_back(odd.draw(step).trv);
  }
  const double d = oracle::ks_statistic_uniform(trvs);
  const double crit = oracle::ks_critical(trvs.size(), kAlpha);
  note(o, d <= crit, fmt("KS D=%.5f crit=%.5f n=%zu", d, crit, trvs.size()));

  for (auto c : {Coupling::antithetic, Coupling::iid}) {
    std::vector<std::uint64_t> histogram;
    for (std::uint32_t w = 0; w < 100000; ++w) {
      const WalkerDraws draws(99, {w % 10, w, Ensemble::first}, c);
      const auto len = sample_walk(table, w % 10, draws, 1000).length;
      if (histogram.size() <= len) histogram.resize(len + 1, 0);
      ++histogram[len];
    }
    const auto chi = oracle::chi_square_geometric(histogram, 0.5, kAlpha);
    note(o, chi.passes(), fmt("%s lengths chi2=%.2f crit=%.2f dof=%zu", to_string(c).c_str(), chi.statistic,
                              chi.critical, chi.dof));
  }
  return o;
}

ExperimentSpec er20_spec() {
  ExperimentSpec spec;
  spec.graph = GeneratorSpec::erdos_renyi(20, 0.4, 0);
  spec.kernel = KernelSpec::diffusion(0.5);
  spec.walker_counts = {2, 4, 8, 16};
  spec.repeats = 100;
  spec.base_seed = 0;
  return spec;
}

// 6. Mean error strictly decreasing in walker count.
Outcome walker_trend() {
  Outcome o;
  const auto report = run_experiment(er20_spec());
  note(o, report.failures.empty(), fmt("failed cells=%zu", report.failures.size()));
  for (auto c : {Coupling::iid, Coupling::antithetic}) {
    std::string means;
    bool decreasing = true;
    double prev = INFINITY;
    for (std::size_t m : {2, 4, 8, 16}) {
      const auto* s = report.find("0", c, m);
      if (!s) {
        decreasing = false;
        continue;
      }
      decreasing = decreasing && s->mean < prev;
      prev = s->mean;
      means += fmt("%s%.4f", means.empty() ? "" : ">", s->mean);
    }
    note(o, decreasing, to_string(c) + " " + means);
  }
  return o;
}

// 7. Ladder graphs: antithetic <= iid at every walker count in most seeds.
Outcome ladder_claim() {
  Outcome o;
  for (std::size_t rungs : {9, 10}) {
    std::size_t good = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      ExperimentSpec spec;
      spec.graph = GeneratorSpec::ladder(rungs);
      spec.kernel = KernelSpec::diffusion(0.5);
      spec.walker_counts = {10, 20, 50, 100};
      spec.repeats = 100;
      spec.base_seed = seed;
      const auto report = run_experiment(spec);
      bool all = report.failures.empty();
      for (std::size_t m : spec.walker_counts) {
        const auto* iid = report.find("0", Coupling::iid, m);
        const auto* anti = report.find("0", Coupling::antithetic, m);
        all = all && iid && anti && anti->mean <= iid->mean;
      }
      if (all) ++good;
    }
    const double fraction = static_cast<double>(good) / 20.0;
    note(o, fraction >= kLadderSeedFraction, fmt("ladder n=%zu seeds passing %zu/20", rungs, good));
  }
  return o;
}

// 8. Win rates on seeded graph families.
Outcome win_rates() {
  Outcome o;
  auto study = [&](const char* name, GeneratorSpec family, double target) {
    WinRateSpec spec;
    spec.graph_template = family;
    spec.num_graphs = 50;
    spec.experiment.kernel = KernelSpec::diffusion(0.5);
    spec.experiment.walker_counts = {2, 4, 8, 16};
    spec.experiment.repeats = 10;
    spec.base_seed = 0;
    const auto r = win_rate_study(spec);
    double reduction = 0.0;
    for (const auto& g : r.graphs) {
      if (!g.failure) reduction += 1.0 - g.antithetic_mean / g.iid_mean;
    }
    reduction /= static_cast<double>(std::max<std::size_t>(1, r.evaluated));
    const bool ok = r.evaluated == 50 && std::abs(r.win_rate - target) <= kWinRateBand;
    note(o, ok,
         fmt("%s win rate %.2f (%zu/%zu; band %.2f+-%.2f; mean error reduction %.1f%%; sign-test p=%.1e)", name,
             r.win_rate, r.wins, r.evaluated, target, kWinRateBand, 100.0 * reduction,
             sign_test_p_value(r.wins, r.evaluated)));
  };
  study("ER(60,0.15)", GeneratorSpec::erdos_renyi(60, 0.15), kWinRateEr);
  study("BA(20,4)", GeneratorSpec::barabasi_albert(20, 4), kWinRateBa);
  return o;
}

// 9. Raw CSV bytes independent of GRFKIT_THREADS.
Outcome determinism() {
  Outcome o;
  auto capture = [](const char* threads) {
    ::setenv("GRFKIT_THREADS", threads, 1);
    auto spec = er20_spec();
    spec.repeats = 20;
    spec.threads = 0;
    std::ostringstream experiment_csv;
    write_raw_csv(experiment_csv, run_experiment(spec).rows);

    WinRateSpec wr;
    wr.graph_template = GeneratorSpec::barabasi_albert(15, 3);
    wr.num_graphs = 6;
    wr.experiment = spec;
    wr.experiment.repeats = 4;
    std::ostringstream winrate_csv;
    write_raw_csv(winrate_csv, win_rate_study(wr).report.rows);
    return experiment_csv.str() + winrate_csv.str();
  };
  const std::string reference = capture("1");
  for (const char* threads : {"2", "3", "8"}) {
    const bool same = capture(threads) == reference;
    note(o, same, fmt("GRFKIT_THREADS=%s vs 1: %s", threads, same ? "identical" : "differs"));
  }
  ::unsetenv("GRFKIT_THREADS");
  note(o, reference.size() > 1000, fmt("%zu bytes compared", reference.size()));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double max_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "exact-kernel closed forms", 1.0, closed_forms},
      {2, "series fidelity", 10.0, series_fidelity},
      {3, "modulation correctness", 0.0, modulation},
      {4, "estimator unbiasedness", 120.0, unbiasedness},
      {5, "coupling correctness", 0.0, coupling},
      {6, "error-vs-walkers trend", 120.0, walker_trend},
      {7, "ladder variance claim", 600.0, ladder_claim},
      {8, "win-rate neighborhoods", 1800.0, win_rates},
      {9, "thread-count determinism", 0.0, determinism},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 9) {
    std::fprintf(stderr, "criterion must be 1-9\n");
    return 2;
  }

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.max_seconds > 0) note(outcome, seconds < c.max_seconds, fmt("runtime %.2fs < %.0fs", seconds, c.max_seconds));
    else outcome.detail += fmt("; runtime %.2fs", seconds);
    std::printf("criterion %d %-26s %s  %s\n", c.id, c.name, outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && outcome.pass;
  }
  if (only == 0) {
    std::printf("criterion 10 %-25s N/A   real-world panels and exact figure curves are out of scope\n",
                "excluded");
  }
  return all_pass ? 0 : 1;
}
