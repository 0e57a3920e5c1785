#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "travwave/io/commands.hpp"

using namespace travwave;

int main(int argc, char** argv) {
  CLI::App app{"Travelling-wave solvers and experiments on compact and radial manifolds"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  for (const auto& name : io::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (JSON), or a manifest from an earlier run")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (overrides the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : io::ExitConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  io::RunConfig cfg;
  try {
    cfg = io::parse_config(io::read_json_file(config_path));
    if (!cfg.subcommand.empty() && cfg.subcommand != cmd)
      throw ConfigurationError("config is for '" + cfg.subcommand + "', not '" + cmd + "'");
    cfg.subcommand = cmd;
    if (!out_dir.empty()) cfg.output = out_dir;
    if (app.get_subcommands().front()->count("--seed")) cfg.seed = seed;
    if (app.get_subcommands().front()->count("--threads")) cfg.threads = threads;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return io::ExitConfig;
  }

  try {
    const auto res = io::run_command(cfg, std::cout);
    std::cout << "manifest " << res.manifest.string() << '\n';
    return res.exit_code;
  } catch (const ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return io::ExitConfig;
  } catch (const ParameterRegimeError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return io::ExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return io::ExitCheckFailed;
  }
}
