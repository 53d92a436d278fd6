// Command-line front end.
//
//   fello_sim run <config>                   simulate and write outputs
//   fello_sim overhead <config>              print the overhead report
//   fello_sim linkbudget <config> --from l,k --to l,k --time s
//   fello_sim validate <config>              check a config and exit
//
// Exit status: 0 success, 1 configuration error, 2 runtime error.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "fello/config.hpp"
#include "fello/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

fello::orbits::SatIndex parse_index(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw fello::ConfigError(flag, "expected 'plane,slot', got '" + text + "'");
  int plane = 0;
  int slot = 0;
  try {
    fello::config::codec::parse(text.substr(0, comma), plane);
    fello::config::codec::parse(text.substr(comma + 1), slot);
  } catch (const std::exception& e) {
    throw fello::ConfigError(flag, e.what());
  }
  return {plane, slot};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning over a LEO constellation with optical inter-satellite links"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  bool paper_literal = false;
  app.add_option("--seed", seed, "Master seed (overrides run.master_seed)");
  app.add_option("--out", out, "Output directory (overrides run.output_dir)");
  app.add_option("--workers", workers, "Worker threads (overrides run.workers)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--paper-literal", paper_literal,
               "Literal y sign, pi phasing, fixed-total aggregation and optical-power SNR");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the scenario");
  auto* overhead = app.add_subcommand("overhead", "Print the system-overhead report");
  auto* linkbudget = app.add_subcommand("linkbudget", "Nominal ISL budget between two satellites");
  auto* validate = app.add_subcommand("validate", "Check a configuration file");
  for (auto* sub : {run, overhead, linkbudget, validate})
    sub->add_option("config", config_path, "Scenario INI file")->required();

  std::string from;
  std::string to;
  double time_s = 0.0;
  linkbudget->add_option("--from", from, "Transmitter as plane,slot")->required();
  linkbudget->add_option("--to", to, "Receiver as plane,slot")->required();
  linkbudget->add_option("--time", time_s, "Seconds since epoch")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  fello::config::ScenarioConfig cfg;
  try {
    cfg = fello::config::load_config(config_path);
    if (seed) cfg.run.master_seed = *seed;
    if (out) cfg.run.output_dir = *out;
    if (workers) cfg.run.workers = *workers;
    if (paper_literal) fello::config::apply_paper_literal(cfg);
    fello::config::validate(cfg);
  } catch (const fello::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*validate) {
      std::cout << config_path << ": ok\n";
    } else if (*overhead) {
      const auto r = fello::scenario::overhead_only(cfg);
      std::cout << fello::overhead::format_text(r);
      if (out) {
        std::filesystem::create_directories(*out);
        fello::scenario::write_overhead(*out, r);
      }
    } else if (*linkbudget) {
      const auto a = parse_index(from, "--from");
      const auto b = parse_index(to, "--to");
      const auto w = fello::config::walker(cfg);
      for (const auto& [s, flag] : {std::pair{a, "--from"}, std::pair{b, "--to"}})
        if (!fello::orbits::in_range(w, s))
          throw fello::ConfigError(flag, fello::orbits::to_string(s) + " is not in the constellation");
      if (a == b) throw fello::ConfigError("--to", "must differ from --from");
      std::cout << fello::scenario::format_link_budget(
          fello::scenario::link_budget(cfg, a, b, time_s));
    } else if (*run) {
      const auto s = fello::scenario::run_scenario(cfg);
      std::cout << "wrote " << s.rows << " rows to " << (s.output_dir / "metrics.csv").string()
                << '\n';
    }
  } catch (const fello::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
