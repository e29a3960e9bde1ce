#include "catch_amalgamated.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "subgrad/bench.hpp"

using namespace subgrad;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
  static std::atomic<unsigned> counter{0};
  const auto ticks =
      std::chrono::steady_clock::now().time_since_epoch().count();
  fs::path p = fs::temp_directory_path() /
               (std::string("benchtest_") + tag + "_" + std::to_string(ticks) +
                "_" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("family and solver labels round-trip") {
  for (Family f : {Family::MaxQuad, Family::NesterovCR, Family::MinQuad,
                   Family::MarginalQP})
    CHECK(family_from_label(family_label(f)) == f);
  for (SolverId s : {SolverId::SRDescent, SolverId::SRDescentAdapt, SolverId::Polyak,
                     SolverId::GradSampling})
    CHECK(solver_from_label(solver_label(s)) == s);
  CHECK(solver_from_label("gs") == SolverId::GradSampling);
  CHECK(family_from_label("nesterov-cr") == Family::NesterovCR);
  REQUIRE_THROWS_AS(family_from_label("quadratic"), std::invalid_argument);
  REQUIRE_THROWS_AS(solver_from_label("bfgs"), std::invalid_argument);
}

TEST_CASE("experiment spec survives a json round trip") {
  ExperimentSpec spec;
  spec.family = Family::MinQuad;
  spec.n = 12;
  spec.m = 4;
  spec.d = 18;
  spec.seeds = {3, 9, 27};
  spec.solvers = {SolverId::SRDescentAdapt, SolverId::GradSampling};
  spec.max_calls = 12345;
  spec.max_time_s = 7.5;
  spec.target_gap = 1e-5;
  spec.gs_samples = 11;
  spec.x0_preset = "alternating";
  spec.wall_clock_csv = true;
  spec.cfg.eps00 = 2.0;
  spec.cfg.nu0 = 0.5;
  spec.cfg.eps_tol = 1e-7;
  spec.cfg.nu_tol = 1e-6;
  spec.cfg.max_outer = 999;
  spec.cfg.max_inner = 17;

  ExperimentSpec back = spec_from_json(nlohmann::json::parse(to_json(spec).dump()));
  CHECK(back.family == spec.family);
  CHECK(back.n == spec.n);
  CHECK(back.m == spec.m);
  CHECK(back.d == spec.d);
  CHECK(back.seeds == spec.seeds);
  REQUIRE(back.solvers.size() == 2);
  CHECK(back.solvers[0] == SolverId::SRDescentAdapt);
  CHECK(back.solvers[1] == SolverId::GradSampling);
  CHECK(back.max_calls == spec.max_calls);
  CHECK(back.max_time_s == spec.max_time_s);
  CHECK(back.target_gap == spec.target_gap);
  CHECK(back.gs_samples == spec.gs_samples);
  CHECK(back.x0_preset == spec.x0_preset);
  CHECK(back.wall_clock_csv == spec.wall_clock_csv);
  CHECK(back.cfg.eps00 == spec.cfg.eps00);
  CHECK(back.cfg.nu0 == spec.cfg.nu0);
  CHECK(back.cfg.eps_tol == spec.cfg.eps_tol);
  CHECK(back.cfg.nu_tol == spec.cfg.nu_tol);
  CHECK(back.cfg.max_outer == spec.cfg.max_outer);
  CHECK(back.cfg.max_inner == spec.cfg.max_inner);
}

TEST_CASE("fstar is known exactly for the constructed families") {
  ExperimentSpec spec;
  for (Family f : {Family::MaxQuad, Family::NesterovCR, Family::MinQuad}) {
    spec.family = f;
    auto v = estimate_fstar(spec);
    REQUIRE(v.has_value());
    CHECK(*v == 0.0);
  }
  spec.family = Family::MarginalQP;
  CHECK_FALSE(estimate_fstar(spec).has_value());
}

TEST_CASE("alternating start point fixes every coordinate") {
  GeneratedProblem p =
      generate_problem(Family::NesterovCR, 5, 0, 0, 1, "alternating");
  REQUIRE(p.x0.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(p.x0[i] == ((i % 2 == 0) ? 0.5 : -0.5));

  // The random preset depends only on the seed.
  GeneratedProblem a = generate_problem(Family::MaxQuad, 6, 4, 0, 9, "random");
  GeneratedProblem b = generate_problem(Family::MaxQuad, 6, 4, 0, 9, "random");
  for (std::size_t i = 0; i < 6; ++i) REQUIRE(a.x0[i] == b.x0[i]);
}

TEST_CASE("experiment validation catches unusable specs") {
  ExperimentSpec spec;
  spec.family = Family::MaxQuad;
  spec.solvers = {SolverId::SRDescent};
  REQUIRE_THROWS_AS(run_experiment(spec, "/tmp/unused"), std::invalid_argument);

  spec.seeds = {1};
  spec.solvers.clear();
  REQUIRE_THROWS_AS(run_experiment(spec, "/tmp/unused"), std::invalid_argument);

  // The step-length rule of the Polyak baseline needs a reference value,
  // which the marginal family cannot provide.
  spec.family = Family::MarginalQP;
  spec.solvers = {SolverId::Polyak};
  REQUIRE_THROWS_AS(run_experiment(spec, "/tmp/unused"), std::invalid_argument);
}

TEST_CASE("a small experiment writes the full file set") {
  ExperimentSpec spec;
  spec.family = Family::MinQuad;
  spec.n = 4;
  spec.m = 2;
  spec.seeds = {1, 2};
  spec.solvers = {SolverId::SRDescent, SolverId::Polyak};
  spec.max_calls = 4000;
  spec.target_gap = 1e-6;
  spec.max_time_s = 30.0;

  fs::path dir = fresh_dir("files");
  ExperimentResult res = run_experiment(spec, dir.string());
  REQUIRE(res.rows.size() == 4);
  CHECK(res.fstar_used == 0.0);

  for (const char* solver : {"srdescent", "polyak"}) {
    for (const char* seed : {"1", "2"}) {
      const std::string stem = std::string(solver) + "_s" + seed;
      REQUIRE(fs::exists(dir / ("trace_" + stem + ".csv")));
      REQUIRE(fs::exists(dir / ("plot_calls_" + stem + ".csv")));
      REQUIRE(fs::exists(dir / ("plot_time_" + stem + ".csv")));
    }
  }

  const std::string summary = slurp(dir / "summary.csv");
  REQUIRE(summary.rfind(
              "solver,seed,status,final_f,gap,oracle1_calls,oracle2_calls,"
              "wall_time_s,fail_flag\n",
              0) == 0);

  const std::string trace = slurp(dir / "trace_srdescent_s1.csv");
  REQUIRE(trace.rfind("k,f,gap,gnorm,eps_ki,eta,inner_iters,oracle1_calls,"
                      "oracle2_calls,wall_time_s\n",
                      0) == 0);

  // Summary rows agree with the tails of their traces.
  CsvTable st = read_csv((dir / "summary.csv").string());
  REQUIRE(st.rows.size() == 4);
  for (const auto& row : st.rows) {
    CsvTable tr = read_csv((dir / ("trace_" + row[0] + "_s" + row[1] + ".csv")).string());
    REQUIRE_FALSE(tr.rows.empty());
    const auto& last = tr.rows.back();
    CHECK(row[3] == last[1]);
    CHECK(row[5] == last[7]);
    CHECK(row[6] == last[8]);
  }

  fs::remove_all(dir);
}

TEST_CASE("rerunning an experiment reproduces every byte") {
  ExperimentSpec spec;
  spec.family = Family::NesterovCR;
  spec.n = 3;
  spec.seeds = {1};
  spec.solvers = {SolverId::SRDescentAdapt, SolverId::GradSampling};
  spec.max_calls = 600;
  spec.target_gap = 1e-4;
  spec.max_time_s = 30.0;

  fs::path d1 = fresh_dir("rerun_a");
  fs::path d2 = fresh_dir("rerun_b");
  run_experiment(spec, d1.string());
  run_experiment(spec, d2.string());

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(d1)) {
    const fs::path other = d2 / entry.path().filename();
    REQUIRE(fs::exists(other));
    REQUIRE(slurp(entry.path()) == slurp(other));
    ++compared;
  }
  REQUIRE(compared == 7);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("csv reader strips carriage returns and blank lines") {
  fs::path dir = fresh_dir("csv");
  const fs::path file = dir / "in.csv";
  {
    std::ofstream out(file, std::ios::binary);
    out << "a,b\r\n1,2\r\n\r\n3,4\n";
  }
  CsvTable t = read_csv(file.string());
  REQUIRE(t.header.size() == 2);
  CHECK(t.header[1] == "b");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "2");
  CHECK(t.rows[1][0] == "3");
  REQUIRE_THROWS_AS(read_csv((dir / "missing.csv").string()), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("summary table aggregates per solver") {
  CsvTable t;
  t.header = {"solver", "seed", "status", "final_f", "gap",
              "oracle1_calls", "oracle2_calls", "wall_time_s", "fail_flag"};
  t.rows = {{"srdescent", "1", "Budget", "1e-9", "1e-9", "100", "50", "0", "0"},
            {"srdescent", "2", "Budget", "2e-9", "2e-9", "200", "70", "0", "0"},
            {"gs", "1", "LineSearchFail", "0.5", "0.5", "400", "0", "0", "1"}};
  const std::string table = render_table(t);
  CHECK(table.find("srdescent") != std::string::npos);
  CHECK(table.find("gs") != std::string::npos);
  // Mean oracle calls over the two successful rows: (150 + 270) / 2.
  CHECK(table.find("210") != std::string::npos);
}

TEST_CASE("plot files can be regenerated from traces alone") {
  ExperimentSpec spec;
  spec.family = Family::MaxQuad;
  spec.n = 4;
  spec.m = 3;
  spec.seeds = {5};
  spec.solvers = {SolverId::SRDescent};
  spec.max_calls = 500;
  spec.target_gap = 1e-6;
  spec.max_time_s = 30.0;

  fs::path dir = fresh_dir("plots");
  ExperimentResult res = run_experiment(spec, dir.string());
  (void)res;
  fs::path redo = fresh_dir("plots_redo");
  emit_plot_data({(dir / "trace_srdescent_s5.csv").string()}, redo.string());
  CHECK(slurp(redo / "plot_calls_srdescent_s5.csv") ==
        slurp(dir / "plot_calls_srdescent_s5.csv"));
  CHECK(slurp(redo / "plot_time_srdescent_s5.csv") ==
        slurp(dir / "plot_time_srdescent_s5.csv"));
  fs::remove_all(dir);
  fs::remove_all(redo);
}
