#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include <CLI11.hpp>

#include "grfkit/error.hpp"

namespace grfkit::cli {

namespace {

using enum Command;

struct KeySpec {
  const char* name;
  const char* help;
  std::vector<Command> commands;
  bool is_flag = false;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"graph", "graph: ladder:10, tree:3, er:20,p=0.4, ba:20,m=2, file:PATH",
       {generate, exact, estimate, experiment, winrate}},
      {"kernel", "kernel: diffusion:t=0.5, reglap:s=1,d=2, matern:nu=2.5,l=1, matern-lap:nu=2,l=1, invcos",
       {exact, estimate, experiment, winrate, dump_series}},
      {"estimator-kernel", "kernel whose series the walkers estimate (defaults to --kernel)",
       {experiment, winrate}},
      {"walkers", "walkers per vertex per ensemble; comma-separated list for sweeps",
       {estimate, experiment, winrate}},
      {"repeats", "independent repeats per cell", {experiment, winrate}},
      {"p", "termination probability in (0,1)", {estimate, experiment, winrate}},
      {"seed", "base seed", {generate, exact, estimate, experiment, winrate}},
      {"kmax", "power-series truncation order", {estimate, experiment, winrate, dump_series}},
      {"couplings", "iid, antithetic or iid,antithetic", {estimate, experiment, winrate}},
      {"mode", "modulation mode: symmetric or asymmetric", {estimate, experiment, winrate, dump_series}},
      {"graphs", "number of seeded graphs", {winrate}},
      {"out", "output path (stdout when omitted)", {generate, exact, estimate, experiment, winrate, dump_series}},
      {"plot", "also write an SVG chart next to --out", {experiment, winrate}, true},
      {"diagnostics", "JSON-lines walk diagnostics path", {estimate}},
  };
  return table;
}

const std::vector<std::pair<Command, const char*>> kCommandNames = {
    {generate, "generate"}, {exact, "exact"},     {estimate, "estimate"},
    {experiment, "experiment"}, {winrate, "winrate"}, {dump_series, "dump-series"},
};

bool applies(const KeySpec& key, Command c) {
  return std::find(key.commands.begin(), key.commands.end(), c) != key.commands.end();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError(std::string(key) + ": expected a nonnegative integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(std::string(text), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw UsageError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

/// "a=1,b=2" with an optional leading bare value stored under `bare_key`.
std::map<std::string, std::string> parse_params(std::string_view text, const std::string& bare_key,
                                                std::string_view context) {
  std::map<std::string, std::string> out;
  if (text.empty()) return out;
  bool first = true;
  for (const auto& part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      if (!first || bare_key.empty()) {
        throw UsageError(std::string(context) + ": expected key=value, got '" + part + "'");
      }
      out[bare_key] = part;
    } else {
      out[trim(std::string_view(part).substr(0, eq))] = trim(std::string_view(part).substr(eq + 1));
    }
    first = false;
  }
  return out;
}

void reject_unknown(const std::map<std::string, std::string>& params,
                    std::initializer_list<const char*> allowed, std::string_view context) {
  for (const auto& [k, v] : params) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw UsageError(std::string(context) + ": unknown parameter '" + k + "'");
    }
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    out[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

}  // namespace

std::string to_string(Command command) {
  for (const auto& [c, name] : kCommandNames) {
    if (c == command) return name;
  }
  return "unknown";
}

GraphSource parse_graph(std::string_view text, std::uint64_t default_seed) {
  const auto colon = text.find(':');
  const std::string family(text.substr(0, colon));
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const std::string context = "--graph " + std::string(text);

  if (family == "file") {
    if (rest.empty()) throw UsageError(context + ": missing path");
    return std::filesystem::path(std::string(rest));
  }

  GeneratorSpec spec;
  std::map<std::string, std::string> params;
  if (family == "ladder") {
    params = parse_params(rest, "n", context);
    if (auto it = params.find("rungs"); it != params.end()) params["n"] = it->second, params.erase(it);
    reject_unknown(params, {"n"}, context);
    spec.family = GraphFamily::ladder;
  } else if (family == "tree" || family == "binary_tree") {
    params = parse_params(rest, "height", context);
    reject_unknown(params, {"height"}, context);
    if (params.count("height")) params["n"] = params["height"];
    params.erase("height");
    spec.family = GraphFamily::binary_tree;
  } else if (family == "er" || family == "erdos_renyi") {
    params = parse_params(rest, "n", context);
    reject_unknown(params, {"n", "p", "seed"}, context);
    spec.family = GraphFamily::erdos_renyi;
    if (!params.count("p")) throw UsageError(context + ": erdos_renyi needs p=<edge probability>");
    spec.p_edge = parse_real("p", params["p"]);
  } else if (family == "ba" || family == "barabasi_albert") {
    params = parse_params(rest, "n", context);
    reject_unknown(params, {"n", "m", "seed"}, context);
    spec.family = GraphFamily::barabasi_albert;
    if (!params.count("m")) throw UsageError(context + ": barabasi_albert needs m=<attachments>");
    spec.m_attach = parse_u64("m", params["m"]);
  } else {
    throw UsageError(context + ": unknown graph family '" + family +
                     "' (expected ladder, tree, er, ba or file)");
  }
  if (!params.count("n")) throw UsageError(context + ": missing size");
  spec.n = parse_u64("graph size", params["n"]);
  spec.seed = params.count("seed") ? parse_u64("seed", params["seed"]) : default_seed;
  try {
    spec.validate();
  } catch (const grfkit::Error& e) {
    throw UsageError(context + ": " + e.what());
  }
  return spec;
}

KernelSpec parse_kernel(std::string_view text) {
  const auto colon = text.find(':');
  const std::string family(text.substr(0, colon));
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const std::string context = "--kernel " + std::string(text);
  auto params = parse_params(rest, "", context);
  auto real = [&](const char* key, double fallback) {
    return params.count(key) ? parse_real(key, params[key]) : fallback;
  };

  KernelSpec spec;
  if (family == "diffusion" || family == "heat") {
    reject_unknown(params, {"t"}, context);
    spec = KernelSpec::diffusion(real("t", 0.5));
  } else if (family == "reglap" || family == "regularized_laplacian") {
    reject_unknown(params, {"s", "d"}, context);
    const auto d = params.count("d") ? parse_u64("d", params["d"]) : 2;
    spec = KernelSpec::regularized_laplacian(real("s", 1.0), static_cast<int>(d));
  } else if (family == "matern" || family == "matern_distance") {
    reject_unknown(params, {"nu", "l"}, context);
    spec = KernelSpec::matern_distance(real("nu", 2.5), real("l", 1.0));
  } else if (family == "matern-lap" || family == "matern_laplacian") {
    reject_unknown(params, {"nu", "l"}, context);
    spec = KernelSpec::matern_laplacian(real("nu", 2.0), real("l", 1.0));
  } else if (family == "invcos" || family == "inverse_cosine") {
    reject_unknown(params, {}, context);
    spec = KernelSpec::inverse_cosine();
  } else {
    throw UsageError(context + ": unknown kernel '" + family +
                     "' (expected diffusion, reglap, matern, matern-lap or invcos)");
  }
  try {
    spec.validate();
  } catch (const grfkit::Error& e) {
    throw UsageError(context + ": " + e.what());
  }
  return spec;
}

RunConfig parse_config(std::span<const std::string> args) {
  CLI::App app{"grfkit: exact graph kernels and random-walk estimators"};
  app.require_subcommand(1);

  std::map<Command, CLI::App*> subcommands;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  bool plot_flag = false;

  for (const auto& [command, name] : kCommandNames) {
    auto* sub = app.add_subcommand(name);
    subcommands[command] = sub;
    sub->add_option("--config", config_path, "flat key=value file with defaults");
    for (const auto& key : key_table()) {
      if (!applies(key, command)) continue;
      const std::string flag = std::string("--") + key.name;
      if (key.is_flag) {
        options[std::string(name) + "/" + key.name] = sub->add_flag(flag, plot_flag, key.help);
      } else {
        options[std::string(name) + "/" + key.name] =
            sub->add_option(flag, flag_values[key.name], key.help);
      }
    }
  }

  std::vector<const char*> argv{"grfkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  std::string command_name;
  for (const auto& [command, name] : kCommandNames) {
    if (subcommands[command]->parsed()) {
      cfg.command = command;
      command_name = name;
    }
  }

  std::map<std::string, std::string> values;
  if (!config_path.empty()) {
    for (auto& [k, v] : read_config_file(config_path)) {
      const auto it = std::find_if(key_table().begin(), key_table().end(),
                                   [&](const KeySpec& key) { return k == key.name; });
      if (it == key_table().end()) throw UsageError(config_path + ": unknown key '" + k + "'");
      if (!applies(*it, cfg.command)) {
        throw UsageError(config_path + ": key '" + k + "' does not apply to '" + command_name + "'");
      }
      values[k] = v;
    }
  }
  for (const auto& key : key_table()) {
    auto it = options.find(command_name + "/" + key.name);
    if (it == options.end() || it->second->count() == 0) continue;
    values[key.name] = key.is_flag ? (plot_flag ? "true" : "false") : flag_values[key.name];
  }

  auto has = [&](const char* k) { return values.count(k) > 0; };
  auto require = [&](const char* k) -> const std::string& {
    if (!has(k)) throw UsageError(command_name + ": missing required --" + std::string(k));
    return values[k];
  };

  if (has("seed")) cfg.seed = parse_u64("--seed", values["seed"]);
  if (has("kmax")) {
    cfg.kmax = parse_u64("--kmax", values["kmax"]);
    if (cfg.kmax < 1) throw UsageError("--kmax must be >= 1");
  }
  if (has("p")) {
    cfg.p_term = parse_real("--p", values["p"]);
    if (!(cfg.p_term > 0.0 && cfg.p_term < 1.0)) throw UsageError("--p must lie in (0, 1)");
  }
  if (has("mode")) {
    const auto& m = values["mode"];
    if (m == "symmetric") cfg.mode = ModulationMode::symmetric;
    else if (m == "asymmetric") cfg.mode = ModulationMode::asymmetric;
    else throw UsageError("--mode: expected symmetric or asymmetric, got '" + m + "'");
  }
  if (has("out")) cfg.output_path = values["out"];
  if (has("diagnostics")) cfg.diagnostics_path = values["diagnostics"];
  if (has("plot")) cfg.plot = parse_bool("--plot", values["plot"]);
  if (has("graphs")) {
    cfg.num_graphs = parse_u64("--graphs", values["graphs"]);
    if (cfg.num_graphs < 1) throw UsageError("--graphs must be >= 1");
  }

  // Scalar checks come before required-key checks so the first error names the bad value.
  if (has("walkers")) {
    for (const auto& w : split(values["walkers"], ',')) {
      const auto m = parse_u64("--walkers", w);
      if (m < 1) throw UsageError("walkers must be >= 1");
      cfg.walkers.push_back(m);
    }
  }

  const bool needs_graph = cfg.command != dump_series;
  const bool needs_kernel = cfg.command != generate;
  if (needs_graph) cfg.graph = parse_graph(require("graph"), cfg.seed);
  if (needs_kernel) cfg.kernel = parse_kernel(require("kernel"));
  if (has("estimator-kernel")) cfg.estimator_kernel = parse_kernel(values["estimator-kernel"]);

  if (cfg.command == winrate && !std::holds_alternative<GeneratorSpec>(*cfg.graph)) {
    throw UsageError("winrate: --graph must be a generator (er, ba, tree, ladder), not a file");
  }

  if (has("couplings")) {
    cfg.couplings.clear();
    for (const auto& c : split(values["couplings"], ',')) {
      try {
        cfg.couplings.push_back(parse_coupling(c));
      } catch (const grfkit::Error& e) {
        throw UsageError(std::string("--couplings: ") + e.what());
      }
    }
  } else if (cfg.command == estimate) {
    cfg.couplings = {Coupling::iid};
  }
  if (cfg.command == estimate && cfg.couplings.size() != 1) {
    throw UsageError("estimate: --couplings takes exactly one of iid or antithetic");
  }

  if (cfg.command == estimate || cfg.command == experiment || cfg.command == winrate) {
    if (!has("walkers")) {
      cfg.walkers = cfg.command == estimate ? std::vector<std::size_t>{16}
                                            : std::vector<std::size_t>{2, 4, 8, 16};
    }
    if (cfg.command == estimate && cfg.walkers.size() != 1) {
      throw UsageError("estimate: --walkers takes a single count");
    }
    if (!std::is_sorted(cfg.walkers.begin(), cfg.walkers.end()) ||
        std::adjacent_find(cfg.walkers.begin(), cfg.walkers.end()) != cfg.walkers.end()) {
      throw UsageError("--walkers must be strictly ascending");
    }
    if (std::find(cfg.couplings.begin(), cfg.couplings.end(), Coupling::antithetic) != cfg.couplings.end()) {
      for (auto m : cfg.walkers) {
        if (m % 2 != 0) throw UsageError("antithetic coupling needs even walker counts, got " + std::to_string(m));
      }
    }
  }

  if (cfg.command == winrate) {
    cfg.repeats = 10;
    if (cfg.couplings.size() != 2 || cfg.couplings[0] == cfg.couplings[1]) {
      throw UsageError("winrate: --couplings must be iid,antithetic");
    }
  }
  if (has("repeats")) cfg.repeats = parse_u64("--repeats", values["repeats"]);
  if ((cfg.command == experiment || cfg.command == winrate) && cfg.repeats < 2) {
    throw UsageError("--repeats must be >= 2");
  }
  if (cfg.plot && !cfg.output_path) throw UsageError("--plot needs --out");

  if (cfg.command == estimate || cfg.command == dump_series ||
      ((cfg.command == experiment || cfg.command == winrate) && !cfg.estimator_kernel)) {
    if (cfg.kernel->family() == KernelFamily::matern_distance) {
      throw UsageError(to_string(cfg.command) +
                       ": matern (distance form) has no walk estimator; use matern-lap, or pass "
                       "--estimator-kernel with experiment/winrate");
    }
  }
  return cfg;
}

}  // namespace grfkit::cli
