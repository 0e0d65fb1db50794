#include "grfkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "grfkit/error.hpp"
#include "grfkit/parallel.hpp"
#include "grfkit/random.hpp"

namespace grfkit {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

struct GraphInfo {
  std::string family;
  std::size_t n = 0;
};

Graph build_graph(const GraphSource& source, GraphInfo& info) {
  if (const auto* gen = std::get_if<GeneratorSpec>(&source)) {
    info.family = to_string(gen->family);
    auto g = generate(*gen);
    info.n = g.num_vertices();
    return g;
  }
  info.family = "file";
  auto loaded = load_edge_list(std::get<std::filesystem::path>(source));
  info.n = loaded.graph.num_vertices();
  return std::move(loaded.graph);
}

}  // namespace

void ExperimentSpec::validate() const {
  if (repeats < 2) throw Error("repeats must be >= 2");
  if (walker_counts.empty()) throw Error("walker_counts must be nonempty");
  for (std::size_t i = 0; i < walker_counts.size(); ++i) {
    if (walker_counts[i] < 1) throw Error("walker counts must be >= 1");
    if (i > 0 && walker_counts[i] <= walker_counts[i - 1]) {
      throw Error("walker_counts must be strictly ascending");
    }
  }
  if (couplings.empty()) throw Error("at least one coupling is required");
  if (!(p_term > 0.0 && p_term < 1.0)) throw Error("p_term must lie in (0, 1)");
  if (kmax < 1) throw Error("Kmax must be >= 1");
  kernel.validate();
  if (estimator_kernel) estimator_kernel->validate();
}

const SummaryRow* ExperimentReport::find(std::string_view graph_id, Coupling coupling,
                                         std::size_t num_walkers) const {
  for (const auto& s : summaries) {
    if (s.graph_id == graph_id && s.coupling == coupling && s.num_walkers == num_walkers) return &s;
  }
  return nullptr;
}

double rel_frobenius(const Matrix& exact, const Matrix& estimate) {
  if (exact.rows() != estimate.rows() || exact.cols() != estimate.cols()) {
    throw Error("rel_frobenius: dimension mismatch");
  }
  const double denom = exact.norm();
  if (denom == 0.0) throw Error("rel_frobenius: exact kernel has zero Frobenius norm");
  return (exact - estimate).norm() / denom;
}

std::uint64_t repeat_seed(std::uint64_t base_seed, std::size_t repeat) noexcept {
  return base_seed ^ mix64(static_cast<std::uint64_t>(repeat) + 0x9E3779B97F4A7C15ull);
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  GraphInfo info;
  std::optional<Graph> graph;
  KernelMatrix truth;
  ModulationSeries mod;
  try {
    graph.emplace(build_graph(spec.graph, info));
    truth = exact_kernel(*graph, spec.kernel);
    const auto& estimator = spec.estimator_kernel ? *spec.estimator_kernel : spec.kernel;
    const auto series = kernel_series(estimator, spec.kmax);
    mod = modulation_from_series(series, spec.mode.value_or(default_modulation_mode(estimator.family())));
  } catch (const std::exception& e) {
    report.failures.push_back({spec.graph_id, "setup", e.what()});
    return report;
  }

  const std::string kernel_label = spec.kernel.label();
  const std::size_t cells_per_repeat = spec.couplings.size() * spec.walker_counts.size();
  std::vector<std::optional<double>> errors(cells_per_repeat * spec.repeats);
  std::vector<std::string> messages(errors.size());

  auto slot = [&](std::size_t c, std::size_t w, std::size_t r) {
    return (c * spec.walker_counts.size() + w) * spec.repeats + r;
  };

  parallel_for(spec.repeats, resolve_thread_count(spec.threads), [&](std::size_t r) {
    const std::uint64_t seed = repeat_seed(spec.base_seed, r);
    for (std::size_t c = 0; c < spec.couplings.size(); ++c) {
      for (std::size_t w = 0; w < spec.walker_counts.size(); ++w) {
        WalkEnsembleConfig cfg;
        cfg.num_walkers = spec.walker_counts[w];
        cfg.p_term = spec.p_term;
        cfg.coupling = spec.force_iid_draws ? Coupling::iid : spec.couplings[c];
        cfg.seed = seed;
        try {
          const auto est = estimate_kernel(*graph, mod, cfg, 1);
          errors[slot(c, w, r)] = rel_frobenius(truth.matrix, est.matrix);
        } catch (const std::exception& e) {
          messages[slot(c, w, r)] = e.what();
        }
      }
    }
  });

  for (std::size_t c = 0; c < spec.couplings.size(); ++c) {
    for (std::size_t w = 0; w < spec.walker_counts.size(); ++w) {
      for (std::size_t r = 0; r < spec.repeats; ++r) {
        const auto i = slot(c, w, r);
        if (errors[i]) {
          report.rows.push_back({spec.graph_id, info.family, info.n, kernel_label, spec.couplings[c],
                                 spec.walker_counts[w], r, *errors[i]});
        } else {
          report.failures.push_back({spec.graph_id,
                                     to_string(spec.couplings[c]) + "/m=" +
                                         std::to_string(spec.walker_counts[w]) +
                                         "/repeat=" + std::to_string(r),
                                     messages[i]});
        }
      }
    }
  }
  report.summaries = summarize(report.rows);
  return report;
}

std::vector<SummaryRow> summarize(std::span<const ErrorRow> rows) {
  using Key = std::tuple<std::string, std::string, std::size_t, std::string, int, std::size_t>;
  std::map<Key, std::size_t> index;
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> samples;
  for (const auto& row : rows) {
    Key key{row.graph_id, row.family, row.n, row.kernel, static_cast<int>(row.coupling), row.num_walkers};
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      out.push_back({row.graph_id, row.family, row.n, row.kernel, row.coupling, row.num_walkers});
      samples.emplace_back();
    }
    samples[it->second].push_back(row.rel_frob_error);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& xs = samples[i];
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    out[i].count = xs.size();
    out[i].mean = mean;
    out[i].stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  }
  for (auto& s : out) {
    bool beats_all = false;
    for (const auto& other : out) {
      if (&other == &s || other.graph_id != s.graph_id || other.kernel != s.kernel ||
          other.num_walkers != s.num_walkers) {
        continue;
      }
      if (!(s.mean < other.mean)) {
        beats_all = false;
        break;
      }
      beats_all = true;
    }
    s.win = beats_all;
  }
  return out;
}

WinRateResult win_rate_study(const WinRateSpec& spec) {
  if (spec.num_graphs < 1) throw Error("num_graphs must be >= 1");
  const auto& couplings = spec.experiment.couplings;
  if (std::find(couplings.begin(), couplings.end(), Coupling::iid) == couplings.end() ||
      std::find(couplings.begin(), couplings.end(), Coupling::antithetic) == couplings.end()) {
    throw Error("win-rate study needs both iid and antithetic couplings");
  }
  spec.experiment.validate();
  spec.graph_template.validate();
  const std::size_t largest = spec.experiment.walker_counts.back();

  WinRateResult result;
  result.graphs.resize(spec.num_graphs);
  std::vector<ExperimentReport> reports(spec.num_graphs);

  parallel_for(spec.num_graphs, resolve_thread_count(spec.threads), [&](std::size_t g) {
    auto& outcome = result.graphs[g];
    outcome.index = g;
    GeneratorSpec gen = spec.graph_template;
    gen.seed = derive_seed(spec.base_seed, g, 0x67);
    outcome.graph_seed = gen.seed;
    ExperimentSpec exp = spec.experiment;
    exp.graph = gen;
    exp.graph_id = std::to_string(g);
    exp.base_seed = derive_seed(spec.base_seed, g, 0x65);
    exp.threads = 1;
    try {
      reports[g] = run_experiment(exp);
      const auto* iid = reports[g].find(exp.graph_id, Coupling::iid, largest);
      const auto* anti = reports[g].find(exp.graph_id, Coupling::antithetic, largest);
      if (!iid || !anti) {
        outcome.failure = reports[g].failures.empty() ? "missing summary cells"
                                                      : reports[g].failures.front().message;
        return;
      }
      outcome.iid_mean = iid->mean;
      outcome.antithetic_mean = anti->mean;
      outcome.win = anti->mean < iid->mean;
    } catch (const std::exception& e) {
      outcome.failure = e.what();
    }
  });

  for (std::size_t g = 0; g < spec.num_graphs; ++g) {
    auto& r = reports[g];
    result.report.rows.insert(result.report.rows.end(), r.rows.begin(), r.rows.end());
    result.report.summaries.insert(result.report.summaries.end(), r.summaries.begin(), r.summaries.end());
    result.report.failures.insert(result.report.failures.end(), r.failures.begin(), r.failures.end());
    if (result.graphs[g].failure) continue;
    ++result.evaluated;
    if (result.graphs[g].win) ++result.wins;
  }
  result.win_rate = result.evaluated == 0
                        ? std::numeric_limits<double>::quiet_NaN()
                        : static_cast<double>(result.wins) / static_cast<double>(result.evaluated);
  return result;
}

double sign_test_p_value(std::size_t successes, std::size_t trials) {
  if (successes > trials) throw Error("sign test: successes exceed trials");
  double p = 0.0;
  const double log_half_n = static_cast<double>(trials) * std::log(0.5);
  for (std::size_t k = successes; k <= trials; ++k) {
    const double log_choose = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(static_cast<double>(trials - k) + 1.0);
    p += std::exp(log_choose + log_half_n);
  }
  return std::min(1.0, p);
}

Coupling parse_coupling(std::string_view text) {
  if (text == "iid") return Coupling::iid;
  if (text == "antithetic" || text == "anti") return Coupling::antithetic;
  throw Error("unknown coupling '" + std::string(text) + "' (expected iid or antithetic)");
}

void write_raw_csv(std::ostream& out, std::span<const ErrorRow> rows) {
  out << kCsvVersionLine << '\n'
      << "graph_id,family,n,kernel,coupling,num_walkers,repeat,rel_frob_error\n";
  for (const auto& r : rows) {
    out << csv_field(r.graph_id) << ',' << csv_field(r.family) << ',' << r.n << ','
        << csv_field(r.kernel) << ',' << to_string(r.coupling) << ',' << r.num_walkers << ','
        << r.repeat << ',' << format_double(r.rel_frob_error) << '\n';
  }
}

std::vector<ErrorRow> read_raw_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kCsvVersionLine, 0) != 0) {
    throw Error("raw CSV: missing '" + std::string(kCsvVersionLine) + "' header");
  }
  if (!std::getline(in, line) || split_csv_line(line).size() != 8) {
    throw Error("raw CSV: missing column header");
  }
  std::vector<ErrorRow> rows;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw Error("raw CSV: expected 8 fields at line " + std::to_string(line_no));
    try {
      rows.push_back({f[0], f[1], std::stoul(f[2]), f[3], parse_coupling(f[4]), std::stoul(f[5]),
                      std::stoul(f[6]), std::stod(f[7])});
    } catch (const std::invalid_argument&) {
      throw Error("raw CSV: bad number at line " + std::to_string(line_no));
    }
  }
  return rows;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << kCsvVersionLine << '\n'
      << "graph_id,family,n,kernel,coupling,num_walkers,count,mean,std,win\n";
  for (const auto& s : rows) {
    out << csv_field(s.graph_id) << ',' << csv_field(s.family) << ',' << s.n << ','
        << csv_field(s.kernel) << ',' << to_string(s.coupling) << ',' << s.num_walkers << ','
        << s.count << ',' << format_double(s.mean) << ',' << format_double(s.stddev) << ','
        << (s.win ? 1 : 0) << '\n';
  }
}

void write_win_rate_csv(std::ostream& out, const WinRateResult& result) {
  out << kCsvVersionLine << '\n' << "graph_id,graph_seed,iid_mean,antithetic_mean,win,status\n";
  for (const auto& g : result.graphs) {
    out << g.index << ',' << g.graph_seed << ',';
    if (g.failure) {
      out << ",,0," << csv_field("failed: " + *g.failure) << '\n';
    } else {
      out << format_double(g.iid_mean) << ',' << format_double(g.antithetic_mean) << ','
          << (g.win ? 1 : 0) << ",ok\n";
    }
  }
}

}  // namespace grfkit
