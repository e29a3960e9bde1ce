// Command-line driver for the benchmark harness.
//
//   bench run --family maxquad --n 10 --m 5 --seeds 1..10 --out results
//             --solvers srdescent,srdescent-adapt,polyak
//   bench verify
//   bench table --summary results/summary.csv
//   bench plot --dir results
//
// `run` executes the (solver, seed) grid and writes trace/plot/summary CSVs.
// `verify` runs the library's property checks and fails on any violation.
// Reruns of the same spec are byte-identical unless --wall-clock is set.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subgrad/bench.hpp"
#include "subgrad/selfcheck.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = std::stoull(s.substr(0, dots));
    const std::uint64_t hi = std::stoull(s.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("--seeds", "range is empty");
    for (std::uint64_t v = lo; v <= hi; ++v) seeds.push_back(v);
    return seeds;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds given");
  return seeds;
}

std::vector<subgrad::SolverId> parse_solvers(const std::string& s) {
  std::vector<subgrad::SolverId> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(subgrad::solver_from_label(item));
  }
  if (out.empty()) throw CLI::ValidationError("--solvers", "no solvers given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark driver for regularized subgradient methods"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "run a (solver, seed) experiment grid");
  std::string family = "maxquad";
  std::size_t n = 50, m = 10, d = 0;
  std::string seeds_arg = "1..10";
  std::string solvers_arg = "srdescent,srdescent-adapt";
  std::string out_dir = "results";
  std::string spec_file, save_spec;
  double target_gap = 1e-8, max_time = 60.0;
  std::uint64_t max_calls = 0;
  std::size_t gs_samples = 0;
  std::string x0_preset = "random";
  bool wall_clock = false;
  double eps0 = 5.0, nu0 = 1e-2, theta_eps = 0.9, theta_nu = 0.5, alpha = 1e-4;
  double eps_tol = 0.0, nu_tol = 0.0;
  int max_outer = 1000000, max_inner = 60;

  auto* o_family = run->add_option("--family", family,
                                   "maxquad | nesterov | minquad | marginal");
  auto* o_n = run->add_option("--n", n, "outer dimension");
  auto* o_m = run->add_option("--m", m, "piece / inner-constraint count");
  auto* o_d = run->add_option("--d", d, "component count for minquad (0: use n)");
  auto* o_seeds = run->add_option("--seeds", seeds_arg, "list 1,2,3 or range 1..10");
  auto* o_solvers = run->add_option("--solvers", solvers_arg,
                                    "comma list: srdescent, srdescent-adapt, polyak, gs");
  auto* o_gap = run->add_option("--target-gap", target_gap, "stop once f - f* <= gap");
  auto* o_time = run->add_option("--max-time", max_time, "per-run wall clock budget [s]");
  auto* o_calls = run->add_option("--max-calls", max_calls, "per-run oracle call budget");
  auto* o_gss = run->add_option("--gs-samples", gs_samples,
                                "gradient samples per iteration (0: 2n)");
  auto* o_x0 = run->add_option("--x0", x0_preset, "random | alternating");
  auto* o_wall = run->add_flag("--wall-clock", wall_clock,
                               "write real wall times into CSVs (breaks rerun identity)");
  auto* o_eps0 = run->add_option("--eps0", eps0, "initial regularization scale");
  auto* o_nu0 = run->add_option("--nu0", nu0, "initial stationarity threshold");
  auto* o_teps = run->add_option("--theta-eps", theta_eps, "regularization shrink factor");
  auto* o_tnu = run->add_option("--theta-nu", theta_nu, "threshold shrink factor");
  auto* o_alpha = run->add_option("--alpha", alpha, "line search slope fraction");
  auto* o_epstol = run->add_option("--eps-tol", eps_tol, "stationarity scale tolerance");
  auto* o_nutol = run->add_option("--nu-tol", nu_tol, "stationarity norm tolerance");
  auto* o_mo = run->add_option("--max-outer", max_outer, "outer iteration cap");
  auto* o_mi = run->add_option("--max-inner", max_inner, "inner halving cap");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--spec", spec_file, "load an experiment spec JSON before flags");
  run->add_option("--save-spec", save_spec, "write the resolved spec JSON here");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "run the library property checks");

  // ---- table ----
  auto* table = app.add_subcommand("table", "aggregate a summary CSV per solver");
  std::string summary_path = "results/summary.csv";
  table->add_option("--summary", summary_path, "path to summary.csv");

  // ---- plot ----
  auto* plot = app.add_subcommand("plot", "regenerate plot CSVs from trace CSVs");
  std::string plot_dir;
  std::string plot_out = "results";
  std::vector<std::string> trace_files;
  plot->add_option("--dir", plot_dir, "directory holding trace_*.csv files");
  plot->add_option("--out", plot_out, "output directory");
  plot->add_option("traces", trace_files, "explicit trace CSV paths");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      subgrad::ExperimentSpec spec;
      if (!spec_file.empty()) {
        std::ifstream in(spec_file);
        if (!in) throw std::runtime_error("cannot open spec file: " + spec_file);
        nlohmann::json j;
        in >> j;
        spec = subgrad::spec_from_json(j);
      }
      if (o_family->count()) spec.family = subgrad::family_from_label(family);
      if (o_n->count()) spec.n = n;
      if (o_m->count()) spec.m = m;
      if (o_d->count()) spec.d = d;
      if (o_seeds->count() || spec_file.empty()) spec.seeds = parse_seeds(seeds_arg);
      if (o_solvers->count() || spec_file.empty())
        spec.solvers = parse_solvers(solvers_arg);
      if (o_gap->count()) spec.target_gap = target_gap;
      if (o_time->count()) spec.max_time_s = max_time;
      if (o_calls->count()) spec.max_calls = max_calls;
      if (o_gss->count()) spec.gs_samples = gs_samples;
      if (o_x0->count()) spec.x0_preset = x0_preset;
      if (o_wall->count()) spec.wall_clock_csv = wall_clock;
      if (o_eps0->count()) spec.cfg.eps00 = eps0;
      if (o_nu0->count()) spec.cfg.nu0 = nu0;
      if (o_teps->count()) spec.cfg.theta_eps = theta_eps;
      if (o_tnu->count()) spec.cfg.theta_nu = theta_nu;
      if (o_alpha->count()) spec.cfg.alpha = alpha;
      if (o_epstol->count()) spec.cfg.eps_tol = eps_tol;
      if (o_nutol->count()) spec.cfg.nu_tol = nu_tol;
      if (o_mo->count()) spec.cfg.max_outer = max_outer;
      if (o_mi->count()) spec.cfg.max_inner = max_inner;

      if (!save_spec.empty()) {
        std::ofstream out(save_spec);
        out << subgrad::to_json(spec).dump(2) << "\n";
      }
      const auto res = subgrad::run_experiment(spec, out_dir);
      std::printf("wrote %zu files to %s (f* = %.17g)\n", res.files.size(),
                  out_dir.c_str(), res.fstar_used);
      const auto summary =
          subgrad::read_csv((std::filesystem::path(out_dir) / "summary.csv").string());
      std::fputs(subgrad::render_table(summary).c_str(), stdout);
      int errors = 0;
      for (const auto& row : res.rows)
        if (row.status == "Error") ++errors;
      if (errors > 0) {
        std::fprintf(stderr, "%d run(s) raised errors\n", errors);
        return 2;
      }
      return 0;
    }

    if (*verify) {
      const auto results = subgrad::run_property_checks();
      int failed = 0;
      for (const auto& r : results) {
        std::printf("[%s] %s%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.empty() ? "" : ": ", r.detail.c_str());
        if (!r.pass) ++failed;
      }
      std::printf("%zu checks, %d failed\n", results.size(), failed);
      return failed == 0 ? 0 : 1;
    }

    if (*table) {
      const auto summary = subgrad::read_csv(summary_path);
      std::fputs(subgrad::render_table(summary).c_str(), stdout);
      return 0;
    }

    if (*plot) {
      if (!plot_dir.empty()) {
        for (const auto& e : std::filesystem::directory_iterator(plot_dir)) {
          const auto name = e.path().filename().string();
          if (name.rfind("trace_", 0) == 0 && e.path().extension() == ".csv")
            trace_files.push_back(e.path().string());
        }
        std::sort(trace_files.begin(), trace_files.end());
      }
      if (trace_files.empty())
        throw std::runtime_error("no trace files given (use --dir or positional paths)");
      subgrad::emit_plot_data(trace_files, plot_out);
      std::printf("rewrote plot CSVs for %zu trace(s) into %s\n", trace_files.size(),
                  plot_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
