#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fsmforge/codegen.hpp"
#include "fsmforge/dsl.hpp"
#include "fsmforge/json_io.hpp"
#include "fsmforge/plugins.hpp"
#include "fsmforge/scenario.hpp"
#include "fsmforge/validate.hpp"

namespace fsmforge::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError {
  std::string message;
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool color;
};

bool color_from_env() {
  const char* v = std::getenv("FSMFORGE_COLOR");
  return v && std::string_view(v) == "1";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError{"cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

enum class Format { Dsl, Json };

Format format_of(const std::string& path) {
  const auto ext = fs::path(path).extension();
  if (ext == ".fsm") return Format::Dsl;
  if (ext == ".json") return Format::Json;
  throw UsageError{"unknown file extension for '" + path + "' (expected .fsm or .json)"};
}

void print(const std::vector<Diagnostic>& diags, const std::string& file, const Streams& io) {
  for (const auto& d : diags) io.err << render(d, file, io.color) << '\n';
}

// Parses by extension. Returns nullopt after printing diagnostics.
std::optional<ContractModel> load(const std::string& path, const Streams& io) {
  const Format format = format_of(path);
  const std::string text = read_file(path);
  auto parsed = format == Format::Dsl ? parse_dsl(text, path) : parse_json(text, path);
  if (!parsed.ok()) {
    print(parsed.diagnostics(), path, io);
    return std::nullopt;
  }
  return std::move(parsed.value());
}

PluginConfig parse_plugin_list(const std::string& list) {
  PluginConfig config;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    auto plugin = plugin_from_name(item);
    if (!plugin) {
      throw UsageError{"unknown plugin '" + item +
                       "' (expected locking, counter, timed, access, events)"};
    }
    config.set(*plugin, true);
  }
  return config;
}

// Validation shared by gen and sim. Prints everything, returns false on errors.
bool checked(const ContractModel& model, const std::string& path, const Streams& io) {
  const auto diags = validate(model);
  print(diags, path, io);
  return !has_errors(diags);
}

int cmd_check(const std::string& path, const Streams& io) {
  auto model = load(path, io);
  if (!model) return kExitFailure;
  const auto diags = validate(*model);
  print(diags, path, io);
  if (has_errors(diags)) return kExitFailure;
  io.out << path << ": ok";
  if (!diags.empty()) io.out << " (" << diags.size() << " warning(s))";
  io.out << '\n';
  return kExitOk;
}

int cmd_gen(const std::string& path, const std::optional<std::string>& plugins,
            const std::string& output, const Streams& io) {
  std::optional<PluginConfig> override_plugins;
  if (plugins) override_plugins = parse_plugin_list(*plugins);
  auto model = load(path, io);
  if (!model) return kExitFailure;
  if (override_plugins) model->plugins = *override_plugins;
  if (!checked(*model, path, io)) return kExitFailure;
  const SourceText source = generate(weave(*model));
  if (output.empty() || output == "-") {
    io.out << source.text;
    return kExitOk;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) throw UsageError{"cannot write '" + output + "'"};
  f << source.text;
  return kExitOk;
}

SimConfig sim_config(const std::string& deployer) {
  SimConfig config;
  config.deployer = deployer;
  return config;
}

int cmd_sim(const std::string& path, const std::string& scenario_path,
            const std::optional<std::string>& plugins, const std::string& deployer,
            const Streams& io) {
  std::optional<PluginConfig> override_plugins;
  if (plugins) override_plugins = parse_plugin_list(*plugins);
  auto model = load(path, io);
  if (!model) return kExitFailure;
  if (override_plugins) model->plugins = *override_plugins;
  if (!checked(*model, path, io)) return kExitFailure;
  const std::string script = read_file(scenario_path);
  std::vector<ScenarioStep> steps;
  try {
    steps = parse_scenario(script);
  } catch (const ScenarioSyntaxError& e) {
    io.err << scenario_path << ": " << e.what() << '\n';
    return kExitUsage;
  }
  ScenarioRunner runner(weave(*model), sim_config(deployer));
  ScenarioReport report;
  for (const auto& step : steps) report.steps.push_back(runner.execute(step));
  report.final_snapshot = snapshot(runner.session());
  io.out << render(report);
  return report.passed() ? kExitOk : kExitFailure;
}

int cmd_repl(const std::string& path, const std::optional<std::string>& plugins,
             const std::string& deployer, const Streams& io) {
  std::optional<PluginConfig> override_plugins;
  if (plugins) override_plugins = parse_plugin_list(*plugins);
  auto model = load(path, io);
  if (!model) return kExitFailure;
  if (override_plugins) model->plugins = *override_plugins;
  if (!checked(*model, path, io)) return kExitFailure;
  ScenarioRunner runner(weave(*model), sim_config(deployer));
  io.out << render(snapshot(runner.session())) << '\n';
  std::string line;
  int number = 0;
  bool failed = false;
  while (io.out << "> " << std::flush, std::getline(io.in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 4, "quit") == 0 || line.compare(first, 4, "exit") == 0) break;
    try {
      const StepResult result = runner.execute(parse_scenario_line(line, number));
      failed = failed || !result.ok;
      io.out << (result.ok ? "" : "FAIL ") << result.message << '\n';
      io.out << render(snapshot(runner.session())) << '\n';
    } catch (const ScenarioSyntaxError& e) {
      io.err << e.what() << '\n';
    }
  }
  io.out << '\n';
  return failed ? kExitFailure : kExitOk;
}

int cmd_fmt(const std::string& path, bool check_only, const Streams& io) {
  const Format format = format_of(path);
  auto model = load(path, io);
  if (!model) return kExitFailure;
  const std::string text = format == Format::Dsl ? emit_dsl(*model) : emit_json(*model);
  if (check_only) {
    if (text == read_file(path)) return kExitOk;
    io.err << path << ": not formatted\n";
    return kExitFailure;
  }
  if (text == read_file(path)) return kExitOk;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError{"cannot write '" + path + "'"};
  f << text;
  return kExitOk;
}

}  // namespace

std::vector<std::string> corpus_paths() {
  std::vector<std::string> paths;
  const fs::path dir = FSMFORGE_CORPUS_DIR;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Streams io{in, out, err, color_from_env()};

  CLI::App app{"Compiles finite-state-machine contract descriptions to Solidity", "fsmforge"};
  app.require_subcommand(1);

  std::string file;
  std::string output = "-";
  std::string scenario;
  std::string deployer = "deployer";
  std::optional<std::string> plugins;
  bool check_only = false;

  auto* check = app.add_subcommand("check", "Parse and validate a contract");
  check->add_option("file", file, ".fsm or .json contract")->required();

  auto* gen = app.add_subcommand("gen", "Generate Solidity");
  gen->add_option("file", file, ".fsm or .json contract")->required();
  gen->add_option("--plugins", plugins, "Comma list overriding the file's plugins block");
  gen->add_option("-o,--output", output, "Output path, '-' for stdout");

  auto* sim = app.add_subcommand("sim", "Run a scenario script against the contract");
  sim->add_option("file", file, ".fsm or .json contract")->required();
  sim->add_option("--scenario", scenario, "Scenario script")->required();
  sim->add_option("--plugins", plugins, "Comma list overriding the file's plugins block");
  sim->add_option("--deployer", deployer, "Actor that deploys the contract");

  auto* repl = app.add_subcommand("repl", "Interactive simulator; type scenario lines, 'quit' exits");
  repl->add_option("file", file, ".fsm or .json contract")->required();
  repl->add_option("--plugins", plugins, "Comma list overriding the file's plugins block");
  repl->add_option("--deployer", deployer, "Actor that deploys the contract");

  auto* fmt = app.add_subcommand("fmt", "Rewrite a contract in canonical form");
  fmt->add_option("file", file, ".fsm or .json contract")->required();
  fmt->add_flag("--check", check_only, "Only report whether the file is formatted");

  auto* examples = app.add_subcommand("examples", "List bundled corpus files");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fsmforge: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*check) return cmd_check(file, io);
    if (*gen) return cmd_gen(file, plugins, output, io);
    if (*sim) return cmd_sim(file, scenario, plugins, deployer, io);
    if (*repl) return cmd_repl(file, plugins, deployer, io);
    if (*fmt) return cmd_fmt(file, check_only, io);
    if (*examples) {
      for (const auto& p : corpus_paths()) out << p << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "fsmforge: " << e.message << '\n';
    return kExitUsage;
  } catch (const SimError& e) {
    err << "fsmforge: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fsmforge::cli
