#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmult/config.hpp"
#include "pmult/demos.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

void apply_tolerance_overrides(pmult::RunConfig& cfg,
                               const std::vector<std::string>& overrides) {
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw pmult::ConfigError("tolerance override must look like name=value: " +
                               kv);
    }
    const std::string key = kv.substr(0, eq);
    double value = 0.0;
    try {
      size_t used = 0;
      value = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw pmult::ConfigError("tolerance override value is not a number: " +
                               kv);
    }
    if (key == "rank_tol") {
      cfg.tolerances.rank_tol = value;
    } else if (key == "residual_tol") {
      cfg.tolerances.residual_tol = value;
    } else if (key == "ortho_tol") {
      cfg.tolerances.ortho_tol = value;
    } else {
      throw pmult::ConfigError(
          "unknown tolerance \"" + key +
          "\"; expected rank_tol, residual_tol, or ortho_tol");
    }
  }
  cfg.tolerances.validate();
}

void write_output(const pmult::Report& rep, const pmult::OutputConfig& out) {
  const std::string body = out.format == "text"
                               ? pmult::render_text(rep.doc)
                               : pmult::emit_report(rep);
  if (out.path.empty()) {
    std::cout << body << "\n";
    return;
  }
  std::ofstream f(out.path, std::ios::binary | std::ios::trunc);
  if (!f) throw pmult::IoError("cannot open output file: " + out.path);
  f << body << "\n";
  if (!f.good()) throw pmult::IoError("failed writing output file: " + out.path);
}

int run_analyze(const std::string& config_path, const std::string& out_path,
                const std::string& format,
                const std::vector<std::string>& tol_overrides) {
  pmult::RunConfig cfg = pmult::load_config(config_path);
  apply_tolerance_overrides(cfg, tol_overrides);
  if (!out_path.empty()) cfg.output.path = out_path;
  if (!format.empty()) cfg.output.format = format;
  const pmult::Report rep = pmult::run_config(cfg);
  write_output(rep, cfg.output);
  return rep.ok ? kExitOk : kExitNumeric;
}

int run_demos(const std::vector<std::string>& names) {
  bool all_passed = true;
  for (const std::string& name : names) {
    const pmult::DemoResult res = pmult::run_demo(name);
    pmult::Report rep;
    rep.doc = {{"demo", res.name}, {"result", res.report}};
    std::cout << emit_report(rep) << "\n";
    std::cout << res.name << ": " << (res.passed ? "pass" : "FAIL") << "\n";
    if (!res.passed) {
      std::cout << "  first failing check: " << res.message << "\n";
      all_passed = false;
    }
  }
  return all_passed ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmult: singular-part analysis of multiplication symbols on "
               "finite-dimensional kernel models"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  std::vector<std::string> tol_overrides;
  auto* analyze = app.add_subcommand(
      "analyze", "Run the queries in a JSON config against its model");
  analyze->add_option("--config", config_path, "path to the run config")
      ->required();
  analyze->add_option("--out", out_path, "write the report here (default stdout)");
  analyze->add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  analyze->add_option("--tol", tol_overrides,
                      "tolerance override, e.g. rank_tol=1e-8 (repeatable)");

  std::string demo_name;
  bool demo_all = false;
  auto* demo = app.add_subcommand("demo", "Run a bundled worked example");
  demo->add_option("name", demo_name, "demo name (see list-demos)");
  demo->add_flag("--all", demo_all, "run every bundled demo");

  auto* list = app.add_subcommand("list-demos", "List the bundled demos");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (analyze->parsed()) {
      return run_analyze(config_path, out_path, format, tol_overrides);
    }
    if (demo->parsed()) {
      if (demo_all == !demo_name.empty()) {
        std::cerr << "error: pass exactly one of a demo name or --all\n";
        return kExitConfig;
      }
      return run_demos(demo_all ? pmult::demo_names()
                                : std::vector<std::string>{demo_name});
    }
    if (list->parsed()) {
      for (const std::string& name : pmult::demo_names()) {
        std::cout << name << "\n";
      }
      return kExitOk;
    }
  } catch (const pmult::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pmult::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
