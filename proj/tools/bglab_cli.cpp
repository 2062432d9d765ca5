// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 runtime invariant violation (or replay mismatch), 4 I/O error.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bglab/errors.hpp"
#include "bglab/io/commands.hpp"
#include "bglab/io/config.hpp"
#include "bglab/parallel.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kInvariant = 3, kIo = 4 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
  std::string mode;
};

void add_common(CLI::App* sub, Common& c, bool needs_config = true) {
  auto* opt = sub->add_option("--config", c.config, "configuration file (JSON)");
  if (needs_config) opt->required();
  sub->add_option("--seed", c.seed, "master seed, overrides the configuration");
  sub->add_option("--out", c.out, "output directory, overrides the configuration");
  sub->add_option("--threads", c.threads, "worker threads (default: BGLAB_THREADS or all cores)");
  sub->add_option("--mode", c.mode, "dynamics override")->check(CLI::IsMember({"standard-gas", "s_n-model", "free-flow"}));
}

bglab::io::RunConfig resolve(const Common& c, bool sweep) {
  auto cfg = bglab::io::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (!c.mode.empty()) {
    const auto m = *bglab::parse_mode(c.mode);
    if (sweep) cfg.sweep.mode = m;
    else cfg.sampler.mode = m;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-sphere event simulator and Boltzmann-Grad diagnostics"};
  app.set_version_flag("--version", BGLAB_VERSION);
  app.require_subcommand(1);

  Common common;
  std::string manifest;
  auto* validate = app.add_subcommand("validate", "check a configuration and the initial state it generates");
  add_common(validate, common);
  auto* simulate = app.add_subcommand("simulate", "run one trajectory and write snapshots and the event log");
  add_common(simulate, common);
  auto* ensemble = app.add_subcommand("ensemble", "run independent members and write their histograms");
  add_common(ensemble, common);
  auto* diagnose = app.add_subcommand("diagnose", "ensemble estimators, free-streaming residual and collision balance");
  add_common(diagnose, common);
  auto* sweep = app.add_subcommand("bg-sweep", "diagnostics along a Boltzmann-Grad scaling sequence");
  add_common(sweep, common);
  auto* replay = app.add_subcommand("replay", "re-run a manifest and compare every output digest");
  replay->add_option("--manifest", manifest, "manifest.json of the run to reproduce")->required();
  replay->add_option("--out", common.out, "directory for the reproduced outputs")->required();
  replay->add_option("--threads", common.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    bglab::configure_threads(common.threads);
    const int threads = bglab::thread_count();

    if (validate->parsed()) {
      const auto cfg = resolve(common, false);
      std::cout << bglab::io::resolved_json(cfg).dump(2) << '\n';
      if (cfg.sampler.n > 0) {
        const auto problems = bglab::io::validate_run(cfg);
        for (const auto& p : problems) std::cerr << "invalid: " << p << '\n';
        if (!problems.empty()) return kConfig;
      }
      std::cerr << "configuration valid\n";
      return kOk;
    }
    if (replay->parsed()) {
      const bglab::io::OutputDir dir(common.out);
      const auto r = bglab::io::replay(manifest, dir, threads);
      for (const auto& f : r.mismatched) std::cerr << "mismatch: " << f << '\n';
      std::cout << (r.identical() ? "replay identical" : "replay differs") << " (" << r.original.files.size()
                << " files, run " << r.original.run_id << ")\n";
      return r.identical() ? kOk : kInvariant;
    }

    std::string command;
    for (auto* sub : {simulate, ensemble, diagnose, sweep})
      if (sub->parsed()) command = sub->get_name();
    const auto cfg = resolve(common, command == "bg-sweep");
    const bglab::io::OutputDir dir(cfg.output_dir);
    const auto m = bglab::io::run_command(command, cfg, dir, threads);
    std::cout << command << " complete: run " << m.run_id << ", " << m.files.size() << " files in "
              << dir.root().string() << '\n';
    return kOk;
  } catch (const bglab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const bglab::ContractViolation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const bglab::PackingInfeasible& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const bglab::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const bglab::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariant;
  }
}
