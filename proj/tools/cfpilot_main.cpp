#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfpilot/config.hpp"
#include "cfpilot/validation.hpp"

namespace {

using namespace cfpilot;

struct CommonOpts {
  std::string out_dir = "out";
  int drops = -1;  // -1: keep preset/config value
  std::uint64_t seed = 0;
  bool have_seed = false;
  bool deterministic = false;
  int jobs = 0;
  std::vector<std::string> overrides;
  bool emit_json = false;
  bool dump_channels_flag = false;
};

void add_common(CLI::App* sub, CommonOpts& c) {
  sub->add_option("-o,--out", c.out_dir, "Output directory")->capture_default_str();
  sub->add_option("-d,--drops", c.drops, "Number of drops (overrides preset)");
  sub->add_option("-s,--seed", c.seed, "Master seed")->each([&](const std::string&) {
    c.have_seed = true;
  });
  sub->add_flag("--deterministic", c.deterministic,
                "Budget the solver in local-search sweeps instead of wall time");
  sub->add_option("-j,--jobs", c.jobs, "Worker threads (0: hardware)");
  sub->add_option("--set", c.overrides,
                  "Config override, section.key=value (repeatable)");
  sub->add_flag("--json", c.emit_json, "Also write result.json");
  sub->add_flag("--dump-channels", c.dump_channels_flag,
                "Dump beta/gamma of drop 0 for the first scheme");
}

ExperimentSpec preset_fig2() {
  ExperimentSpec s;
  s.base.num_aps = 50;
  s.base.num_ues = 12;
  s.base.radio.num_pilots = 3;
  s.schemes = {Scheme::Random,     Scheme::Greedy, Scheme::Repulsive, Scheme::ImsEs,
               Scheme::ImsVs,      Scheme::Exhaustive, Scheme::Ideal};
  return s;
}

ExperimentSpec preset_fig3() {
  ExperimentSpec s;
  s.base.num_ues = 40;
  s.base.radio.num_pilots = 10;
  s.sweep = Sweep{"num_aps", {50, 100, 150, 200, 250, 300}};
  return s;
}

ExperimentSpec preset_fig4() {
  ExperimentSpec s;
  s.base.num_aps = 100;
  s.base.radio.num_pilots = 10;
  s.sweep = Sweep{"num_ues", {20, 30, 40, 50, 60}};
  return s;
}

ExperimentSpec preset_fig5() {
  ExperimentSpec s;
  s.base.num_aps = 100;
  s.base.num_ues = 50;
  s.sweep = Sweep{"num_pilots", {5, 10, 15, 20, 30, 40}};
  return s;
}

ExperimentSpec preset_fig6() {
  ExperimentSpec s;
  s.base.num_aps = 120;
  s.base.num_ues = 50;
  s.base.radio.num_pilots = 10;
  s.schemes = {Scheme::ImsEs, Scheme::ImsVs, Scheme::Greedy, Scheme::Random};
  s.sweep = Sweep{"loc_error_m", {0, 50, 100, 150, 200, 300}};
  return s;
}

ExperimentSpec preset_fig7() {
  ExperimentSpec s;
  s.base.num_aps = 120;
  s.base.num_ues = 50;
  s.base.radio.num_pilots = 10;
  s.schemes = {Scheme::ImsEs, Scheme::ImsVs};
  s.sweep = Sweep{"feature", {0, 1, 2}};
  return s;
}

ExperimentSpec preset_table2() {
  ExperimentSpec s;
  s.base.num_aps = 200;
  s.base.num_ues = 40;
  s.base.radio.num_pilots = 10;
  s.sweep = Sweep{"antennas_per_ap", {1, 3}};
  return s;
}

int run_experiment_cmd(ExperimentSpec spec, const CommonOpts& c) {
  if (c.drops >= 0) spec.drops = c.drops;
  if (c.have_seed) spec.seed = c.seed;
  if (c.deterministic) spec.solver.ims.deterministic = true;
  for (const std::string& kv : c.overrides) apply_override(spec, kv);

  std::filesystem::create_directories(c.out_dir);
  {
    std::ofstream out(c.out_dir + "/spec.json");
    out << spec_to_json_text(spec);
  }

  const ExperimentResult res = run_experiment(spec, c.jobs);
  write_samples_csv(res, c.out_dir + "/samples.csv");
  write_summary_csv(res, c.out_dir + "/summary.csv");
  if (c.emit_json) write_json(res, c.out_dir + "/result.json");
  if (c.dump_channels_flag) {
    dump_channels(spec.base, spec.schemes.front(), spec.solver, spec.seed, 0,
                  c.out_dir + "/channels");
  }

  std::printf("%-10s %12s %12s %12s %12s\n", "scheme", "sweep", "mean_ul_Mbps",
              "p5_ul_Mbps", "p95_ul_Mbps");
  for (Scheme s : res.schemes) {
    for (double v : res.sweep_values) {
      const std::vector<double> ul = res.select_ul(s, v);
      if (ul.empty()) continue;
      double mean = 0.0;
      for (double x : ul) mean += x;
      mean /= static_cast<double>(ul.size());
      std::printf("%-10s %12g %12.3f %12.3f %12.3f\n",
                  std::string(scheme_name(s)).c_str(), v, mean / 1e6,
                  percentile(ul, 5) / 1e6, percentile(ul, 95) / 1e6);
    }
  }
  std::printf("wrote %s/samples.csv, %s/summary.csv\n", c.out_dir.c_str(),
              c.out_dir.c_str());

  if (!res.errors.empty()) {
    for (const std::string& e : res.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO pilot assignment simulator"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string config_path;

  CLI::App* cmd_run = app.add_subcommand("run", "Run the experiment from a JSON config");
  cmd_run->add_option("-c,--config", config_path, "JSON config path");
  add_common(cmd_run, common);

  struct Preset {
    const char* name;
    const char* help;
    ExperimentSpec (*make)();
  };
  const std::vector<Preset> presets = {
      {"fig2", "Small instance incl. exhaustive search (50 APs, 12 UEs, 3 pilots)",
       preset_fig2},
      {"fig3", "Sweep the number of APs (40 UEs, 10 pilots)", preset_fig3},
      {"fig4", "Sweep the number of UEs (100 APs, 10 pilots)", preset_fig4},
      {"fig5", "Sweep the pilot length (100 APs, 50 UEs)", preset_fig5},
      {"fig6", "Sweep the location-error level (120 APs, 50 UEs)", preset_fig6},
      {"fig7", "Compare clustering feature sources (120 APs, 50 UEs)", preset_fig7},
      {"table2", "One vs three antennas per AP (200 APs, 40 UEs)", preset_table2},
  };
  std::vector<CLI::App*> preset_cmds;
  for (const Preset& p : presets) {
    CLI::App* sub = app.add_subcommand(p.name, p.help);
    add_common(sub, common);
    preset_cmds.push_back(sub);
  }

  bool quick = false;
  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Run the built-in validation suite");
  cmd_validate->add_flag("--quick", quick, "Only the fast checks (1-5)");
  cmd_validate->add_option("-j,--jobs", common.jobs, "Worker threads (0: hardware)");
  cmd_validate->add_option("-s,--seed", common.seed, "Master seed")
      ->each([&](const std::string&) { common.have_seed = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      ValidationOptions opt;
      opt.quick = quick;
      opt.jobs = common.jobs;
      if (common.have_seed) opt.seed = common.seed;
      const std::vector<CheckResult> results = run_validation(opt);
      bool all = true;
      for (const CheckResult& r : results) {
        all = all && r.pass;
        std::printf("[%s] check %2d: %s | %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
      }
      return all ? 0 : 1;
    }

    if (cmd_run->parsed()) {
      ExperimentSpec spec =
          config_path.empty() ? ExperimentSpec{} : load_spec(config_path);
      return run_experiment_cmd(std::move(spec), common);
    }
    for (std::size_t i = 0; i < presets.size(); ++i) {
      if (preset_cmds[i]->parsed()) {
        return run_experiment_cmd(presets[i].make(), common);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
