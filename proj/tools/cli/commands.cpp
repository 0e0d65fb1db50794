#include "cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "cli/plot.hpp"
#include "grfkit/error.hpp"
#include "grfkit/parallel.hpp"

namespace grfkit::cli {

namespace {

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  return f;
}

class Sink {
 public:
  Sink(const std::optional<std::filesystem::path>& path, std::ostream& fallback) {
    if (path) {
      file_ = open_output(*path);
      stream_ = &file_;
    } else {
      stream_ = &fallback;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_file(const std::filesystem::path& path, const auto& writer) {
  auto f = open_output(path);
  writer(f);
}

Graph load_graph(const GraphSource& source, std::ostream& log) {
  if (const auto* gen = std::get_if<GeneratorSpec>(&source)) return generate(*gen);
  auto loaded = load_edge_list(std::get<std::filesystem::path>(source));
  if (loaded.duplicates_dropped > 0) {
    log << "warning: dropped " << loaded.duplicates_dropped << " duplicate edge(s)\n";
  }
  return std::move(loaded.graph);
}

ExperimentSpec experiment_spec(const RunConfig& cfg) {
  ExperimentSpec spec;
  spec.graph = *cfg.graph;
  spec.kernel = *cfg.kernel;
  spec.estimator_kernel = cfg.estimator_kernel;
  spec.walker_counts = cfg.walkers;
  spec.repeats = cfg.repeats;
  spec.p_term = cfg.p_term;
  spec.couplings = cfg.couplings;
  spec.base_seed = cfg.seed;
  spec.kmax = cfg.kmax;
  spec.mode = cfg.mode;
  return spec;
}

void print_summaries(const ExperimentReport& report, std::ostream& log) {
  for (const auto& s : report.summaries) {
    char line[160];
    std::snprintf(line, sizeof line, "%-10s m=%-4zu mean=%.6g std=%.6g%s\n", to_string(s.coupling).c_str(),
                  s.num_walkers, s.mean, s.stddev, s.win ? "  (lower)" : "");
    log << line;
  }
  for (const auto& f : report.failures) {
    log << "failed cell " << f.graph_id << "/" << f.cell << ": " << f.message << '\n';
  }
}

int run_experiment_command(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const auto report = run_experiment(experiment_spec(cfg));
  {
    Sink sink(cfg.output_path, out);
    write_raw_csv(sink.stream(), report.rows);
  }
  if (cfg.output_path) {
    write_file(sibling(*cfg.output_path, ".summary.csv"),
               [&](std::ostream& f) { write_summary_csv(f, report.summaries); });
  }
  if (cfg.plot) emit_plot(report, sibling(*cfg.output_path, ".svg"));
  print_summaries(report, log);
  return report.rows.empty() ? kExitRuntime : kExitSuccess;
}

int run_winrate_command(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  WinRateSpec spec;
  spec.graph_template = std::get<GeneratorSpec>(*cfg.graph);
  spec.num_graphs = cfg.num_graphs;
  spec.experiment = experiment_spec(cfg);
  spec.base_seed = cfg.seed;
  const auto result = win_rate_study(spec);
  {
    Sink sink(cfg.output_path, out);
    write_raw_csv(sink.stream(), result.report.rows);
  }
  if (cfg.output_path) {
    write_file(sibling(*cfg.output_path, ".summary.csv"),
               [&](std::ostream& f) { write_summary_csv(f, result.report.summaries); });
    write_file(sibling(*cfg.output_path, ".graphs.csv"),
               [&](std::ostream& f) { write_win_rate_csv(f, result); });
  }
  if (cfg.plot) emit_plot(result.report, sibling(*cfg.output_path, ".svg"));
  for (const auto& g : result.graphs) {
    if (g.failure) log << "warning: graph " << g.index << " excluded: " << *g.failure << '\n';
  }
  char line[128];
  std::snprintf(line, sizeof line, "win_rate=%.4f wins=%zu evaluated=%zu\n", result.win_rate, result.wins,
                result.evaluated);
  log << line;
  return result.evaluated == 0 ? kExitRuntime : kExitSuccess;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  switch (cfg.command) {
    case Command::generate: {
      const auto g = load_graph(*cfg.graph, log);
      Sink sink(cfg.output_path, out);
      write_edge_list(sink.stream(), g);
      log << g.num_vertices() << " vertices, " << g.num_edges() << " edges\n";
      return kExitSuccess;
    }
    case Command::exact: {
      const auto g = load_graph(*cfg.graph, log);
      const auto k = exact_kernel(g, *cfg.kernel);
      Sink sink(cfg.output_path, out);
      write_matrix_csv(sink.stream(), k.matrix);
      return kExitSuccess;
    }
    case Command::estimate: {
      const auto g = load_graph(*cfg.graph, log);
      const auto series = kernel_series(*cfg.kernel, cfg.kmax);
      const auto mod =
          modulation_from_series(series, cfg.mode.value_or(default_modulation_mode(cfg.kernel->family())));
      WalkEnsembleConfig walk;
      walk.num_walkers = cfg.walkers.front();
      walk.p_term = cfg.p_term;
      walk.coupling = cfg.couplings.front();
      walk.seed = cfg.seed;
      const auto est = estimate_kernel(g, mod, walk, resolve_thread_count());
      {
        Sink sink(cfg.output_path, out);
        write_matrix_csv(sink.stream(), est.matrix);
      }
      if (cfg.diagnostics_path) {
        write_file(*cfg.diagnostics_path, [&](std::ostream& f) {
          f << est.first.to_json_line(Ensemble::first) << '\n'
            << est.second.to_json_line(Ensemble::second) << '\n';
        });
      }
      const auto truth = exact_kernel(g, *cfg.kernel);
      char line[96];
      std::snprintf(line, sizeof line, "rel_frob_error=%.6g\n", rel_frobenius(truth.matrix, est.matrix));
      log << line;
      return kExitSuccess;
    }
    case Command::experiment:
      return run_experiment_command(cfg, out, log);
    case Command::winrate:
      return run_winrate_command(cfg, out, log);
    case Command::dump_series: {
      const auto series = kernel_series(*cfg.kernel, cfg.kmax);
      const auto mod =
          modulation_from_series(series, cfg.mode.value_or(default_modulation_mode(cfg.kernel->family())));
      Sink sink(cfg.output_path, out);
      auto& s = sink.stream();
      s << kCsvVersionLine << '\n' << "k,alpha_k,f1_k,f2_k\n";
      char line[128];
      for (std::size_t k = 0; k < series.coefficients.size(); ++k) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", k, series.coefficients[k], mod.f1[k],
                      mod.f2[k]);
        s << line;
      }
      std::snprintf(line, sizeof line, "tail_bound=%.6g mode=%s\n", series.tail_bound,
                    to_string(mod.mode).c_str());
      log << line;
      return kExitSuccess;
    }
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitSuccess;
  } catch (const UsageError& e) {
    log << "grfkit: usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    return run(cfg, out, log);
  } catch (const std::exception& e) {
    log << "grfkit: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace grfkit::cli
