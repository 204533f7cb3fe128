#include "risline/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

struct RunArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool extended = false;
  bool timing = false;
};

void add_run_options(CLI::App* cmd, RunArgs& args, CLI::Option*& seed_opt) {
  cmd->add_option("--config,-c", args.config, "experiment INI file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out,-o", args.out, "output directory (default: [run] output)");
  seed_opt = cmd->add_option("--seed", args.seed, "run a single seed instead of the config's list");
  cmd->add_flag("--extended", args.extended, "allow exhaustive baselines up to 26 line variables");
  cmd->add_flag("--timing", args.timing, "record wall_time_s instead of NA");
}

int run(risline::Command command, const RunArgs& args, bool seed_given) {
  const std::string text = risline::read_text_file(args.config);
  const risline::ExperimentConfig cfg = risline::parse_config(text);
  risline::RunOptions options;
  if (seed_given) options.seed = args.seed;
  options.extended = args.extended;
  options.timing = args.timing;
  const std::filesystem::path out = args.out.empty() ? cfg.output : std::filesystem::path(args.out);
  const risline::RunOutput result = risline::execute_run(command, text, options, out);
  for (const auto& note : result.notes) std::cout << note << '\n';
  std::cout << result.rows.size() << " rows -> " << (out / "results.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line-controlled RIS phase optimization experiments"};
  app.require_subcommand(1);

  RunArgs quad_args, scaling_args, distance_args;
  CLI::Option* quad_seed = nullptr;
  CLI::Option* scaling_seed = nullptr;
  CLI::Option* distance_seed = nullptr;
  auto* quad = app.add_subcommand("quadcmp", "line-control reductions against the exhaustive line optimum");
  add_run_options(quad, quad_args, quad_seed);
  auto* scaling = app.add_subcommand("scaling", "received power versus RIS size");
  add_run_options(scaling, scaling_args, scaling_seed);
  auto* distance = app.add_subcommand("distance", "received power versus UT distance with design-point phases");
  add_run_options(distance, distance_args, distance_seed);

  std::string manifest_path;
  std::string scratch;
  auto* verify = app.add_subcommand("verify-manifest", "replay a run and compare its CSV digest");
  verify->add_option("manifest", manifest_path, "manifest.txt of a previous run")->required();
  verify->add_option("--scratch", scratch, "replay directory (default: a temporary directory)");

  std::string export_config;
  std::string export_path;
  std::string export_level = "2";
  auto* export_cmd = app.add_subcommand("export-ising", "write the full-element coupling problem of a scene");
  export_cmd->add_option("--config,-c", export_config, "experiment INI file")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out,-o", export_path, "problem file")->required();
  export_cmd->add_option("--levels", export_level, "2 or 4")->check(CLI::IsMember({"2", "4"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*quad) return run(risline::Command::QuadCmp, quad_args, quad_seed->count() > 0);
    if (*scaling) return run(risline::Command::Scaling, scaling_args, scaling_seed->count() > 0);
    if (*distance) return run(risline::Command::Distance, distance_args, distance_seed->count() > 0);
    if (*verify) {
      const std::filesystem::path dir =
          scratch.empty() ? std::filesystem::temp_directory_path() / ("risline-verify-" + std::to_string(::getpid()))
                          : std::filesystem::path(scratch);
      const risline::VerifyReport report = risline::verify_manifest(manifest_path, dir);
      if (scratch.empty()) std::filesystem::remove_all(dir);
      std::cout << report.message << '\n';
      return report.ok ? 0 : 1;
    }
    if (*export_cmd) {
      const risline::ExperimentConfig cfg = risline::parse_config(risline::read_text_file(export_config));
      const auto level = export_level == "2" ? risline::Discretization::TwoLevel : risline::Discretization::FourLevel;
      const auto problem = risline::coupling_from_channel(risline::los_channel(risline::build_scene(cfg.scene)), level);
      std::ofstream out(export_path);
      risline::write_problem(out, problem);
      std::cout << problem.size() << " spins -> " << export_path << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
