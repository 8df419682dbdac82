#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfpilot/config.hpp"
#include "cfpilot/harness.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cfpilot;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.base.num_aps = 30;
  spec.base.num_ues = 8;
  spec.base.radio.num_pilots = 3;
  spec.schemes = {Scheme::Random, Scheme::ImsEs, Scheme::Ideal};
  spec.drops = 2;
  spec.seed = 9;
  spec.solver.ims.deterministic = true;
  spec.solver.ims.sweep_budget = 40;
  return spec;
}

bool same_samples(const std::vector<Sample>& a, const std::vector<Sample>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].scheme != b[i].scheme || a[i].sweep_value != b[i].sweep_value ||
        a[i].drop != b[i].drop || a[i].ue != b[i].ue ||
        a[i].ul_tput_bps != b[i].ul_tput_bps || a[i].dl_tput_bps != b[i].dl_tput_bps) {
      return false;
    }
  }
  return true;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "cfpilot_harness_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

TEST_CASE("percentile closed forms and validation") {
  CHECK(percentile({4.0, 2.0, 3.0, 1.0}, 50.0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(percentile({4.0, 2.0, 3.0, 1.0}, 0.0) == 1.0);
  CHECK(percentile({4.0, 2.0, 3.0, 1.0}, 100.0) == 4.0);

  std::vector<double> seq(100);
  std::iota(seq.begin(), seq.end(), 0.0);
  CHECK(percentile(seq, 95.0) == doctest::Approx(94.05).epsilon(1e-12));
  CHECK(percentile(seq, 5.0) == doctest::Approx(4.95).epsilon(1e-12));

  CHECK(percentile({7.0, 7.0, 7.0}, 33.0) == 7.0);
  CHECK(percentile({5.0}, 0.0) == 5.0);
  CHECK(percentile({5.0}, 100.0) == 5.0);

  CHECK_THROWS_AS(percentile({}, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(percentile({1.0}, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(percentile({1.0}, 100.1), std::invalid_argument);
}

TEST_CASE("drop scenarios are reproducible and decoupled") {
  ScenarioTemplate base;
  base.num_aps = 20;
  base.num_ues = 6;
  const Scenario a = make_drop_scenario(base, 5, 3);
  const Scenario b = make_drop_scenario(base, 5, 3);
  CHECK(a.seed == b.seed);
  REQUIRE(a.topology.ues.size() == 6);
  REQUIRE(a.topology.aps.size() == 20);
  for (std::size_t i = 0; i < a.topology.ues.size(); ++i) {
    CHECK(a.topology.ues[i].x_km == b.topology.ues[i].x_km);
    CHECK(a.topology.ues[i].y_km == b.topology.ues[i].y_km);
  }

  const Scenario c = make_drop_scenario(base, 5, 4);
  bool moved = false;
  for (std::size_t i = 0; i < a.topology.ues.size(); ++i) {
    moved = moved || a.topology.ues[i].x_km != c.topology.ues[i].x_km;
  }
  CHECK(moved);
}

TEST_CASE("run_drop yields positive throughputs with sane ordering") {
  ScenarioTemplate base;
  base.num_aps = 50;
  base.num_ues = 12;
  base.radio.num_pilots = 3;
  SolverConfig solver;
  solver.ims.deterministic = true;
  solver.ims.sweep_budget = 40;

  const DropResult random = run_drop(base, Scheme::Random, solver, 1, 0);
  const DropResult ideal = run_drop(base, Scheme::Ideal, solver, 1, 0);
  REQUIRE(random.ul_tput_bps.size() == 12);
  REQUIRE(random.dl_tput_bps.size() == 12);
  double sum_random = 0.0, sum_ideal = 0.0;
  for (int k = 0; k < 12; ++k) {
    CHECK(random.ul_tput_bps[k] > 0.0);
    CHECK(random.dl_tput_bps[k] > 0.0);
    CHECK(std::isfinite(random.ul_tput_bps[k]));
    sum_random += random.ul_tput_bps[k];
    sum_ideal += ideal.ul_tput_bps[k];
  }
  // no contamination and clean estimates: the ideal drop can only be better
  CHECK(sum_ideal >= 0.99 * sum_random);

  // balancing transmit power lifts the drop's weakest user
  const DropResult balanced =
      run_drop(base, Scheme::Random, solver, 1, 0, UlPowerPolicy::MaxMin);
  const double floor_full =
      *std::min_element(random.ul_tput_bps.begin(), random.ul_tput_bps.end());
  const double floor_balanced =
      *std::min_element(balanced.ul_tput_bps.begin(), balanced.ul_tput_bps.end());
  CHECK(floor_balanced >= floor_full * (1.0 - 1e-6));
}

TEST_CASE("experiments are reproducible and independent of the job count") {
  const ExperimentSpec spec = small_spec();
  const ExperimentResult serial = run_experiment(spec, 1);
  const ExperimentResult parallel = run_experiment(spec, 4);
  CHECK(serial.errors.empty());
  CHECK(same_samples(serial.samples, parallel.samples));
  CHECK(serial.samples.size() == 3u * 2u * 8u);
}

TEST_CASE("each scheme consumes an isolated solver stream") {
  ExperimentSpec spec = small_spec();
  const ExperimentResult full = run_experiment(spec, 2);
  spec.schemes = {Scheme::ImsEs};
  const ExperimentResult alone = run_experiment(spec, 2);
  CHECK(full.select_ul(Scheme::ImsEs, 0.0) == alone.select_ul(Scheme::ImsEs, 0.0));
  CHECK(full.select_dl(Scheme::ImsEs, 0.0) == alone.select_dl(Scheme::ImsEs, 0.0));
}

TEST_CASE("one drop of one scheme emits exactly one sample per UE") {
  ExperimentSpec spec = small_spec();
  spec.schemes = {Scheme::Repulsive};
  spec.drops = 1;
  const ExperimentResult res = run_experiment(spec, 1);
  REQUIRE(res.samples.size() == 8);
  std::vector<int> seen(8, 0);
  for (const Sample& s : res.samples) {
    CHECK(s.scheme == Scheme::Repulsive);
    CHECK(s.sweep_value == 0.0);
    CHECK(s.drop == 0);
    ++seen[s.ue];
  }
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("sweeps fan out and are validated before any work starts") {
  ExperimentSpec spec = small_spec();
  spec.schemes = {Scheme::Random};
  spec.sweep = Sweep{"num_pilots", {2.0, 4.0}};
  const ExperimentResult res = run_experiment(spec, 2);
  CHECK(res.sweep_param == "num_pilots");
  CHECK(res.sweep_values == std::vector<double>{2.0, 4.0});
  CHECK(res.select_ul(Scheme::Random, 2.0).size() == 2u * 8u);
  CHECK(res.select_ul(Scheme::Random, 4.0).size() == 2u * 8u);
  CHECK(res.select_ul(Scheme::Random, 3.0).empty());

  spec.sweep = Sweep{"warp_speed", {1.0}};
  CHECK_THROWS_AS(run_experiment(spec, 4), std::invalid_argument);
  spec.sweep = Sweep{"loc_error_m", {-5.0}};
  CHECK_THROWS_AS(run_experiment(spec, 4), std::invalid_argument);
  spec.sweep = Sweep{"num_pilots", {}};
  CHECK_THROWS_AS(run_experiment(spec, 1), std::invalid_argument);

  spec.sweep.reset();
  spec.drops = 0;
  CHECK_THROWS_AS(run_experiment(spec, 1), std::invalid_argument);
  spec.drops = 1;
  spec.schemes.clear();
  CHECK_THROWS_AS(run_experiment(spec, 1), std::invalid_argument);
}

TEST_CASE("a failing cell is recorded without poisoning the rest") {
  ExperimentSpec spec = small_spec();
  spec.schemes = {Scheme::Exhaustive, Scheme::Ideal};
  spec.solver.exhaustive.budget = 1;
  const ExperimentResult res = run_experiment(spec, 2);
  CHECK(res.errors.size() == 2);  // one per drop
  for (const std::string& e : res.errors) {
    CHECK(e.find("exhaustive") != std::string::npos);
    CHECK(e.find("budget") != std::string::npos);
  }
  CHECK(res.select_ul(Scheme::Exhaustive, 0.0).empty());
  CHECK(res.select_ul(Scheme::Ideal, 0.0).size() == 2u * 8u);
}

TEST_CASE("sample CSV round trips exactly") {
  const fs::path dir = scratch_dir();
  ExperimentSpec spec = small_spec();
  spec.schemes = {Scheme::Greedy};
  spec.drops = 1;
  const ExperimentResult res = run_experiment(spec, 1);

  const fs::path path = dir / "samples.csv";
  write_samples_csv(res, path.string());
  const auto rows = read_csv(path);
  REQUIRE(rows.size() == res.samples.size() + 1);
  CHECK(rows[0] == std::vector<std::string>{"scheme", "sweep_param", "sweep_value",
                                            "drop", "ue", "ul_tput_bps", "dl_tput_bps"});
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    const auto& row = rows[i + 1];
    REQUIRE(row.size() == 7);
    CHECK(row[0] == scheme_name(res.samples[i].scheme));
    CHECK(row[1] == "none");
    CHECK(std::strtod(row[2].c_str(), nullptr) == res.samples[i].sweep_value);
    CHECK(std::atoi(row[3].c_str()) == res.samples[i].drop);
    CHECK(std::atoi(row[4].c_str()) == res.samples[i].ue);
    CHECK(std::strtod(row[5].c_str(), nullptr) == res.samples[i].ul_tput_bps);
    CHECK(std::strtod(row[6].c_str(), nullptr) == res.samples[i].dl_tput_bps);
  }

  // an empty result still writes a well-formed header
  const fs::path empty_path = dir / "empty.csv";
  write_samples_csv(ExperimentResult{}, empty_path.string());
  CHECK(read_csv(empty_path).size() == 1);
}

TEST_CASE("summary CSV carries the advertised percentiles") {
  const fs::path dir = scratch_dir();
  ExperimentSpec spec = small_spec();
  spec.schemes = {Scheme::Random, Scheme::Ideal};
  const ExperimentResult res = run_experiment(spec, 2);
  const fs::path path = dir / "summary.csv";
  write_summary_csv(res, path.string());

  const auto rows = read_csv(path);
  REQUIRE(rows.size() == 1 + 2u * 8u);  // two schemes, mean + three percentiles per link
  CHECK(rows[0] == std::vector<std::string>{"scheme", "sweep_value", "metric", "value"});
  bool found = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 4);
    if (rows[i][0] == "ideal" && rows[i][2] == "p95_ul_tput_bps") {
      found = true;
      CHECK(std::strtod(rows[i][3].c_str(), nullptr) ==
            percentile(res.select_ul(Scheme::Ideal, 0.0), 95.0));
    }
  }
  CHECK(found);
}

TEST_CASE("JSON report parses back with consistent content") {
  const fs::path dir = scratch_dir();
  ExperimentSpec spec = small_spec();
  spec.schemes = {Scheme::Greedy};
  const ExperimentResult res = run_experiment(spec, 2);
  const fs::path path = dir / "report.json";
  write_json(res, path.string());

  std::ifstream in(path);
  const nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j.at("sweep_param").get<std::string>() == "none");
  CHECK(j.at("errors").empty());
  REQUIRE(j.at("samples").size() == res.samples.size());
  CHECK(j.at("samples").at(0).at("scheme").get<std::string>() == "greedy");
  CHECK(j.at("samples").at(0).at("ul_tput_bps").get<double>() ==
        res.samples[0].ul_tput_bps);
  CHECK(j.at("summary").size() == 8);
}

TEST_CASE("channel dumps have one row per AP and one column per UE") {
  const fs::path dir = scratch_dir();
  ScenarioTemplate base;
  base.num_aps = 7;
  base.num_ues = 4;
  base.radio.num_pilots = 2;
  SolverConfig solver;
  dump_channels(base, Scheme::Random, solver, 3, 0, dir.string());

  for (const char* name : {"beta.csv", "gamma.csv"}) {
    const auto rows = read_csv(dir / name);
    REQUIRE(rows.size() == 7);
    for (const auto& row : rows) {
      REQUIRE(row.size() == 4);
      for (const std::string& cell : row) {
        CHECK(std::strtod(cell.c_str(), nullptr) > 0.0);
      }
    }
  }
}

TEST_CASE("an empty config keeps every default") {
  const ExperimentSpec spec = spec_from_json_text("{}");
  CHECK(spec.base.num_aps == 100);
  CHECK(spec.base.num_ues == 40);
  CHECK(spec.base.radio.num_pilots == 10);
  CHECK(spec.drops == 100);
  CHECK(spec.seed == 1);
  CHECK(spec.schemes.size() == 6);
  CHECK(spec.ul_power == UlPowerPolicy::Full);
  CHECK_FALSE(spec.sweep.has_value());
  CHECK(spec.solver.feature == FeatureSource::Location);

  CHECK_THROWS_AS(spec_from_json_text("{"), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json_text(R"({"experiment":{"schemes":["warp"]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json_text(R"({"experiment":{"ul_power":"half"}})"),
                  std::invalid_argument);
}

TEST_CASE("spec serialization round trips every section") {
  ExperimentSpec spec;
  spec.base.radio.num_pilots = 7;
  spec.base.radio.bandwidth_hz = 10e6;
  spec.base.num_aps = 17;
  spec.base.num_ues = 9;
  spec.base.antennas_per_ap = 2;
  spec.base.area_km = 2.5;
  spec.schemes = {Scheme::Ideal, Scheme::Random};
  spec.drops = 3;
  spec.seed = 42;
  spec.sweep = Sweep{"loc_error_m", {0.0, 100.0}};
  spec.solver.feature = FeatureSource::Lsf;
  spec.solver.loc_error_std_m = 75.0;
  spec.solver.greedy_iters = 5;
  spec.solver.ims.sweep_budget = 123;
  spec.solver.ims.deterministic = true;
  spec.solver.ims.initial_solutions = 4;
  spec.solver.exhaustive.budget = 999;
  spec.solver.exhaustive.objective = ExhaustiveObjective::SumUlRate;
  spec.ul_power = UlPowerPolicy::MaxMin;

  const ExperimentSpec back = spec_from_json_text(spec_to_json_text(spec));
  CHECK(back.base.radio.num_pilots == 7);
  CHECK(back.base.radio.bandwidth_hz == 10e6);
  CHECK(back.base.num_aps == 17);
  CHECK(back.base.num_ues == 9);
  CHECK(back.base.antennas_per_ap == 2);
  CHECK(back.base.area_km == 2.5);
  CHECK(back.schemes == std::vector<Scheme>{Scheme::Ideal, Scheme::Random});
  CHECK(back.drops == 3);
  CHECK(back.seed == 42);
  REQUIRE(back.sweep.has_value());
  CHECK(back.sweep->param == "loc_error_m");
  CHECK(back.sweep->values == std::vector<double>{0.0, 100.0});
  CHECK(back.solver.feature == FeatureSource::Lsf);
  CHECK(back.solver.loc_error_std_m == 75.0);
  CHECK(back.solver.greedy_iters == 5);
  CHECK(back.solver.ims.sweep_budget == 123);
  CHECK(back.solver.ims.deterministic == true);
  CHECK(back.solver.ims.initial_solutions == 4);
  CHECK(back.solver.exhaustive.budget == 999);
  CHECK(back.solver.exhaustive.objective == ExhaustiveObjective::SumUlRate);
  CHECK(back.ul_power == UlPowerPolicy::MaxMin);
}

TEST_CASE("dotted overrides patch the spec in place") {
  ExperimentSpec spec;
  apply_override(spec, "radio.num_pilots=3");
  CHECK(spec.base.radio.num_pilots == 3);
  apply_override(spec, "experiment.schemes=[\"random\",\"ideal\"]");
  CHECK(spec.schemes == std::vector<Scheme>{Scheme::Random, Scheme::Ideal});
  apply_override(spec, "experiment.ul_power=maxmin");
  CHECK(spec.ul_power == UlPowerPolicy::MaxMin);
  apply_override(spec, "solver.ims.sweep_budget=77");
  CHECK(spec.solver.ims.sweep_budget == 77);
  apply_override(spec, R"(experiment.sweep={"param":"num_pilots","values":[2,4]})");
  REQUIRE(spec.sweep.has_value());
  CHECK(spec.sweep->param == "num_pilots");
  CHECK(spec.sweep->values == std::vector<double>{2.0, 4.0});

  CHECK_THROWS_AS(apply_override(spec, "radio.warp_factor=1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(spec, "no_equals_sign"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(spec, "experiment.ul_power=half"),
                  std::invalid_argument);
}
