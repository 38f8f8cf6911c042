// Command-line experiment runner on top of the amsbq C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amsbq/amsbq.h"

namespace {

int fail_with(amsbq_status status) {
  std::fprintf(stderr, "amsbq: %s: %s\n", amsbq_status_name(status), amsbq_last_error());
  return status == AMSBQ_ERR_INVALID_ARGUMENT ? 2 : 1;
}

struct ConfigHandle {
  amsbq_config* ptr = nullptr;
  ~ConfigHandle() { amsbq_config_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active multi-source Bayesian quadrature experiment runner"};
  app.require_subcommand(1);

  std::string run_config_path;
  std::string run_seed, run_budget, run_acq, run_out;
  bool run_allow_pathological = false;
  bool run_print_csv = false;
  auto* run_cmd = app.add_subcommand("run", "execute one configured run, emit a CSV log");
  run_cmd->add_option("config", run_config_path, "run configuration file (key=value lines)")
      ->required();
  run_cmd->add_option("--seed", run_seed, "override the rng seed");
  run_cmd->add_option("--budget", run_budget, "override the cost budget");
  run_cmd->add_option("--acq", run_acq, "override the acquisition kind (mi|ivr|ip)");
  run_cmd->add_option("--out", run_out, "override the CSV output path");
  run_cmd->add_flag("--allow-pathological", run_allow_pathological,
                    "permit the ip acquisition despite its known misbehavior");
  run_cmd->add_flag("--print-csv", run_print_csv, "print the CSV to stdout as well");

  std::vector<std::string> compare_paths;
  std::string compare_threshold, compare_out, compare_seed, compare_budget;
  bool compare_allow_pathological = false;
  auto* compare_cmd =
      app.add_subcommand("compare", "run several configs on one benchmark and summarize");
  compare_cmd->add_option("configs", compare_paths, "two or more configuration files")
      ->required()
      ->expected(-2);
  compare_cmd->add_option("--threshold", compare_threshold,
                          "relative-error tolerance for cost-to-tolerance");
  compare_cmd->add_option("--seed", compare_seed, "override the rng seed for every config");
  compare_cmd->add_option("--budget", compare_budget, "override the cost budget for every config");
  compare_cmd->add_option("--out", compare_out, "write the summary CSV here");
  compare_cmd->add_flag("--allow-pathological", compare_allow_pathological,
                        "permit the ip acquisition despite its known misbehavior");

  auto* list_cmd = app.add_subcommand("benchmarks", "list the registered benchmark ids");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    std::printf("%s\n", amsbq_benchmark_list());
    return 0;
  }

  if (run_cmd->parsed()) {
    ConfigHandle config;
    amsbq_status status = amsbq_config_load(run_config_path.c_str(), &config.ptr);
    if (status != AMSBQ_OK) return fail_with(status);

    auto set = [&](const char* key, const std::string& value) {
      if (value.empty()) return AMSBQ_OK;
      return amsbq_config_set(config.ptr, key, value.c_str());
    };
    if ((status = set("seed", run_seed)) != AMSBQ_OK) return fail_with(status);
    if ((status = set("budget", run_budget)) != AMSBQ_OK) return fail_with(status);
    if ((status = set("acquisition", run_acq)) != AMSBQ_OK) return fail_with(status);
    if ((status = set("out", run_out)) != AMSBQ_OK) return fail_with(status);
    if (run_allow_pathological) {
      if ((status = amsbq_config_set(config.ptr, "allow-pathological", "true")) != AMSBQ_OK) {
        return fail_with(status);
      }
    }

    amsbq_result* result = nullptr;
    status = amsbq_run(config.ptr, &result);
    if (status != AMSBQ_OK) return fail_with(status);
    std::printf("rows=%zu estimate=%.12g ground_truth=%.12g rel_err=%.12g\n",
                amsbq_result_num_rows(result), amsbq_result_final_estimate(result),
                amsbq_result_ground_truth(result), amsbq_result_final_rel_err(result));
    if (run_print_csv) std::fputs(amsbq_result_csv(result), stdout);
    amsbq_result_free(result);
    return 0;
  }

  // compare
  std::vector<ConfigHandle> configs(compare_paths.size());
  std::vector<const amsbq_config*> raw;
  for (std::size_t i = 0; i < compare_paths.size(); ++i) {
    amsbq_status status = amsbq_config_load(compare_paths[i].c_str(), &configs[i].ptr);
    if (status != AMSBQ_OK) return fail_with(status);
    auto set = [&](const char* key, const std::string& value) {
      if (value.empty()) return AMSBQ_OK;
      return amsbq_config_set(configs[i].ptr, key, value.c_str());
    };
    if ((status = set("threshold", compare_threshold)) != AMSBQ_OK) return fail_with(status);
    if ((status = set("seed", compare_seed)) != AMSBQ_OK) return fail_with(status);
    if ((status = set("budget", compare_budget)) != AMSBQ_OK) return fail_with(status);
    if (compare_allow_pathological) {
      if ((status = amsbq_config_set(configs[i].ptr, "allow-pathological", "true")) != AMSBQ_OK) {
        return fail_with(status);
      }
    }
    raw.push_back(configs[i].ptr);
  }

  amsbq_summary* summary = nullptr;
  amsbq_status status = amsbq_compare(raw.data(), raw.size(), &summary);
  if (status != AMSBQ_OK) return fail_with(status);
  std::fputs(amsbq_summary_table(summary), stdout);
  if (!compare_out.empty()) {
    FILE* f = std::fopen(compare_out.c_str(), "wb");
    if (f == nullptr) {
      std::fprintf(stderr, "amsbq: cannot write %s\n", compare_out.c_str());
      amsbq_summary_free(summary);
      return 1;
    }
    std::fputs(amsbq_summary_csv(summary), f);
    std::fclose(f);
  }
  amsbq_summary_free(summary);
  return 0;
}
