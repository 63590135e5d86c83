#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "dimreader/dataset.hpp"
#include "dimreader/errors.hpp"
#include "dimreader/pipeline.hpp"
#include "dimreader/synthetic.hpp"

namespace {

struct Overrides {
  std::string method;
  std::string output_dir;
  std::string extraction;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void apply(dimreader::RunConfig& config, const Overrides& o) {
  if (!o.method.empty())
    config.projection.method = dimreader::projection_method_from_string(o.method);
  if (!o.output_dir.empty()) config.output_dir = o.output_dir;
  if (!o.extraction.empty()) {
    if (o.extraction == "halves")
      config.extraction = dimreader::RunConfig::ExtractionScheme::kHalves;
    else if (o.extraction == "one-at-a-time")
      config.extraction = dimreader::RunConfig::ExtractionScheme::kOneAtATime;
    else
      throw dimreader::ConfigError("unknown extraction scheme: " + o.extraction);
  }
  if (o.seed_set) config.projection.seed = o.seed;
}

void add_override_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--method", o.method, "override the projection method");
  cmd->add_option("--output-dir", o.output_dir, "override the output directory");
  cmd->add_option("--extraction", o.extraction, "override the extraction scheme");
  cmd->add_option("--seed", o.seed, "override the seed")->each([&o](const std::string&) {
    o.seed_set = true;
  });
}

void print_report(const dimreader::RunReport& report) {
  std::printf("projection runs: %d\n", report.projection_runs);
  for (const auto& [phase, seconds] : report.phase_seconds)
    std::printf("%-10s %.3fs\n", phase.c_str(), seconds);
  for (const auto& w : report.warnings) std::printf("warning: %s\n", w.c_str());
  for (const auto& o : report.outputs) std::printf("wrote %s\n", o.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DimReader: generalized axes for non-linear dimensionality reduction"};
  app.require_subcommand(1);

  std::string run_config_path;
  Overrides run_overrides;
  CLI::App* run = app.add_subcommand("run", "execute a full pipeline from a config file");
  run->add_option("config", run_config_path, "JSON run configuration")->required();
  add_override_flags(run, run_overrides);

  std::string gen_name, gen_out, gen_params_out;
  int gen_n = 400;
  std::uint64_t gen_seed = 1;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset CSV");
  gen->add_option("name", gen_name, "scurve | swissroll | rings | blobs")->required();
  gen->add_option("--n", gen_n, "number of points");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();
  gen->add_option("--params-out", gen_params_out,
                  "also write the generating manifold parameters");

  std::string discover_config_path;
  Overrides discover_overrides;
  CLI::App* discover =
      app.add_subcommand("discover", "find the best perturbation for a dataset");
  discover->add_option("config", discover_config_path, "JSON run configuration")
      ->required();
  add_override_flags(discover, discover_overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto config = dimreader::RunConfig::from_json_file(run_config_path);
      apply(config, run_overrides);
      print_report(dimreader::run_pipeline(config));
    } else if (*gen) {
      auto data = dimreader::make_synthetic(gen_name, gen_n, gen_seed);
      dimreader::save_csv(data.dataset, gen_out);
      std::printf("wrote %s (%d x %d)\n", gen_out.c_str(), data.dataset.n(),
                  data.dataset.d());
      if (!gen_params_out.empty()) {
        dimreader::Dataset params;
        params.points = data.params;
        params.dim_names = data.param_names;
        dimreader::save_csv(params, gen_params_out);
        std::printf("wrote %s\n", gen_params_out.c_str());
      }
    } else if (*discover) {
      auto config = dimreader::RunConfig::from_json_file(discover_config_path);
      apply(config, discover_overrides);
      print_report(dimreader::run_discovery(config));
    }
  } catch (const dimreader::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
