#pragma once

// Experiment harness: generates instances, fans (solver, seed) runs across
// worker threads, and writes trace, summary, and plot CSVs. Reruns of the
// same ExperimentSpec produce byte-identical files; wall-clock columns are
// zeroed unless wall_clock_csv is set, since real timings are not
// reproducible.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "subgrad/linalg.hpp"
#include "subgrad/problems.hpp"
#include "subgrad/solvers.hpp"

namespace subgrad {

enum class Family { MaxQuad, NesterovCR, MinQuad, MarginalQP };
enum class SolverId { SRDescent, SRDescentAdapt, Polyak, GradSampling };

inline std::string family_label(Family f) {
  switch (f) {
    case Family::MaxQuad: return "maxquad";
    case Family::NesterovCR: return "nesterovcr";
    case Family::MinQuad: return "minquad";
    case Family::MarginalQP: return "marginalqp";
  }
  return "unknown";
}

inline Family family_from_label(const std::string& s) {
  if (s == "maxquad") return Family::MaxQuad;
  if (s == "nesterovcr" || s == "nesterov-cr") return Family::NesterovCR;
  if (s == "minquad") return Family::MinQuad;
  if (s == "marginalqp" || s == "marginal-qp") return Family::MarginalQP;
  throw std::invalid_argument("unknown family: " + s);
}

inline std::string solver_label(SolverId s) {
  switch (s) {
    case SolverId::SRDescent: return "srdescent";
    case SolverId::SRDescentAdapt: return "srdescent-adapt";
    case SolverId::Polyak: return "polyak";
    case SolverId::GradSampling: return "gs";
  }
  return "unknown";
}

inline SolverId solver_from_label(const std::string& s) {
  if (s == "srdescent") return SolverId::SRDescent;
  if (s == "srdescent-adapt" || s == "srdescentadapt") return SolverId::SRDescentAdapt;
  if (s == "polyak") return SolverId::Polyak;
  if (s == "gs" || s == "gradsampling") return SolverId::GradSampling;
  throw std::invalid_argument("unknown solver: " + s);
}

struct ExperimentSpec {
  Family family = Family::MaxQuad;
  std::size_t n = 50, m = 10, d = 0;  // d = 0 means d = n where relevant
  std::vector<std::uint64_t> seeds;
  std::vector<SolverId> solvers;
  SolverConfig cfg;
  std::uint64_t max_calls = 0;  // 0 disables the cap
  double max_time_s = 60.0;
  double target_gap = 1e-8;
  std::size_t gs_samples = 0;  // 0 means 2n
  std::string x0_preset = "random";  // "random" or "alternating"
  bool wall_clock_csv = false;
};

struct SummaryRow {
  std::string solver;
  std::uint64_t seed = 0;
  std::string status;
  double final_f = 0.0;
  double gap = 0.0;
  std::uint64_t oracle1_calls = 0;
  std::uint64_t oracle2_calls = 0;
  double wall_time_s = 0.0;
  int fail_flag = 0;
};

struct GeneratedProblem {
  Family family = Family::MaxQuad;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Oracle1 o1;
  Oracle2 o2;
  Vector x0;
  std::optional<double> fstar;
};

// Known optimal values: zero for the three constructed families, unknown
// for the marginal QP family (resolved per experiment from the best run).
inline std::optional<double> estimate_fstar(const ExperimentSpec& spec) {
  if (spec.family == Family::MarginalQP) return std::nullopt;
  return 0.0;
}

// Instance and start point for one seed. The generator consumes the seed
// stream first and the start point is drawn from the remainder, so every
// solver sees the same instance and the same x0 for a given seed.
inline GeneratedProblem generate_problem(Family family, std::size_t n, std::size_t m,
                                         std::size_t d, std::uint64_t seed,
                                         const std::string& x0_preset = "random") {
  GeneratedProblem out;
  out.family = family;
  out.seed = seed;
  RngStream rng(seed);
  switch (family) {
    case Family::MaxQuad: {
      auto inst = std::make_shared<MaxQuadInstance>(gen_max_quad(n, m, rng));
      inst->seed = seed;
      std::shared_ptr<const MaxQuadInstance> c = inst;
      out.o1 = oracle1_view(c);
      out.o2 = oracle2_view(c);
      out.n = n;
      out.fstar = 0.0;
      break;
    }
    case Family::NesterovCR: {
      auto inst = std::make_shared<NesterovCRInstance>(gen_nesterov_cr(n));
      std::shared_ptr<const NesterovCRInstance> c = inst;
      out.o1 = oracle1_view(c);
      out.o2 = oracle2_view(c);
      out.n = n;
      out.fstar = 0.0;
      break;
    }
    case Family::MinQuad: {
      const std::size_t dd = d == 0 ? n : d;
      auto inst = std::make_shared<MinQuadInstance>(gen_min_quad(n, dd, m, rng));
      inst->seed = seed;
      std::shared_ptr<const MinQuadInstance> c = inst;
      out.o1 = oracle1_view(c);
      out.o2 = oracle2_view(c);
      out.n = n;
      out.fstar = 0.0;
      break;
    }
    case Family::MarginalQP: {
      auto inst = std::make_shared<MarginalQPInstance>(gen_marginal_qp(n, m, rng));
      inst->seed = seed;
      std::shared_ptr<const MarginalQPInstance> c = inst;
      out.o1 = oracle1_view(c);
      out.o2 = oracle2_view(c);
      out.n = n;
      out.fstar = std::nullopt;
      break;
    }
  }
  if (x0_preset == "alternating") {
    out.x0 = Vector(out.n);
    for (std::size_t i = 0; i < out.n; ++i)
      out.x0[i] = (i % 2 == 0) ? 0.5 : -0.5;
  } else {
    out.x0 = default_x0(out.n, rng);
  }
  return out;
}

namespace bdetail {

inline std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

inline std::string status_label(RunStatus s) {
  switch (s) {
    case RunStatus::ApproxStationary: return "ApproxStationary";
    case RunStatus::Budget: return "Budget";
    case RunStatus::InnerLoopStall: return "InnerLoopStall";
    case RunStatus::LineSearchFail: return "LineSearchFail";
  }
  return "Unknown";
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline double clamped_log10_gap(double gap) {
  return std::log10(std::max(gap, 1e-300));
}

inline std::string trace_csv(const RunTrace& tr, double fstar, bool wall_clock) {
  std::string s = "k,f,gap,gnorm,eps_ki,eta,inner_iters,oracle1_calls,oracle2_calls,wall_time_s\n";
  for (const auto& r : tr.records) {
    s += std::to_string(r.k);
    s += ',';
    s += fmt_double(r.f);
    s += ',';
    s += fmt_double(r.f - fstar);
    s += ',';
    s += fmt_double(r.gnorm);
    s += ',';
    s += fmt_double(r.eps_ki);
    s += ',';
    s += fmt_double(r.eta);
    s += ',';
    s += std::to_string(r.inner_iters);
    s += ',';
    s += std::to_string(r.oracle1_calls);
    s += ',';
    s += std::to_string(r.oracle2_calls);
    s += ',';
    s += fmt_double(wall_clock ? r.wall_time_s : 0.0);
    s += '\n';
  }
  return s;
}

inline std::string plot_csv(const RunTrace& tr, double fstar, bool time_axis,
                            bool wall_clock) {
  std::string s = time_axis ? "time_s,log10_gap\n" : "calls,log10_gap\n";
  for (const auto& r : tr.records) {
    if (time_axis) {
      s += fmt_double(wall_clock ? r.wall_time_s : 0.0);
    } else {
      s += std::to_string(r.oracle1_calls + r.oracle2_calls);
    }
    s += ',';
    s += fmt_double(clamped_log10_gap(r.f - fstar));
    s += '\n';
  }
  return s;
}

inline unsigned thread_count(std::size_t tasks) {
  unsigned n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("BENCH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) n = static_cast<unsigned>(v);
  }
  if (n == 0) n = 1;
  if (n > tasks) n = static_cast<unsigned>(tasks);
  return std::max(1u, n);
}

}  // namespace bdetail

struct ExperimentResult {
  std::vector<SummaryRow> rows;
  double fstar_used = 0.0;
  std::vector<std::string> files;
};

// Runs the full (solver, seed) grid of a spec and writes one trace CSV and
// two plot CSVs per run plus one summary CSV. Solver exceptions become
// failed rows rather than crashes. Returns the summary and the resolved
// optimal value.
inline ExperimentResult run_experiment(const ExperimentSpec& spec,
                                       const std::string& out_dir) {
  if (spec.seeds.empty()) throw std::invalid_argument("run_experiment: no seeds");
  if (spec.solvers.empty()) throw std::invalid_argument("run_experiment: no solvers");
  const std::optional<double> fstar_known = estimate_fstar(spec);
  for (SolverId s : spec.solvers) {
    if (s == SolverId::Polyak && !fstar_known)
      throw std::invalid_argument(
          "run_experiment: the Polyak baseline needs a known optimal value");
  }
  std::filesystem::create_directories(out_dir);

  struct Task {
    SolverId solver;
    std::uint64_t seed = 0;
    std::size_t problem_index = 0;
  };
  std::vector<GeneratedProblem> problems;
  problems.reserve(spec.seeds.size());
  for (std::uint64_t seed : spec.seeds)
    problems.push_back(
        generate_problem(spec.family, spec.n, spec.m, spec.d, seed, spec.x0_preset));

  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < spec.seeds.size(); ++pi)
    for (SolverId s : spec.solvers) tasks.push_back(Task{s, spec.seeds[pi], pi});

  struct Outcome {
    RunTrace trace;
    std::string status;
    bool errored = false;
    std::string error;
    double elapsed = 0.0;
  };
  std::vector<Outcome> outcomes(tasks.size());

  auto run_one = [&](std::size_t ti) {
    const Task& task = tasks[ti];
    const GeneratedProblem& prob = problems[task.problem_index];
    Outcome& out = outcomes[ti];
    const double t0 = sdetail::now_seconds();
    try {
      SolverConfig cfg = spec.cfg;
      cfg.max_time_s = std::min(cfg.max_time_s, spec.max_time_s);
      if (spec.max_calls > 0) cfg.max_oracle_calls = spec.max_calls;
      if (fstar_known && spec.target_gap > 0.0)
        cfg.target_f = *fstar_known + spec.target_gap;
      switch (task.solver) {
        case SolverId::SRDescent:
          out.trace = run_algorithm1(prob.o2, prob.x0, cfg);
          break;
        case SolverId::SRDescentAdapt:
          out.trace = run_algorithm2(prob.o2, prob.x0, cfg);
          break;
        case SolverId::Polyak: {
          // The baseline records every iteration, so an open-ended budget
          // has to stop where the other solvers' max_outer default does or
          // a cheap oracle fills memory with trace rows.
          const std::uint64_t cap =
              spec.max_calls > 0 ? spec.max_calls : 1000000ULL;
          out.trace = run_polyak(prob.o1, *fstar_known, prob.x0, cap, spec.max_time_s,
                                 cfg.target_f);
          break;
        }
        case SolverId::GradSampling: {
          RngStream rng = RngStream(task.seed).derive(
              1000 + static_cast<std::uint64_t>(task.solver));
          const std::size_t k = spec.gs_samples > 0 ? spec.gs_samples : 2 * prob.n;
          out.trace = run_gradient_sampling(prob.o1, prob.x0, k, cfg, rng);
          break;
        }
      }
      out.status = bdetail::status_label(out.trace.status);
    } catch (const std::exception& e) {
      out.errored = true;
      out.error = e.what();
      out.status = "Error";
    }
    out.elapsed = sdetail::now_seconds() - t0;
  };

  const unsigned nthreads = bdetail::thread_count(tasks.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) break;
          run_one(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Resolve the reference value: known for constructed families, otherwise
  // the best final objective observed in this experiment.
  double fstar = 0.0;
  if (fstar_known) {
    fstar = *fstar_known;
  } else {
    fstar = std::numeric_limits<double>::infinity();
    for (const auto& out : outcomes) {
      if (out.errored || out.trace.records.empty()) continue;
      fstar = std::min(fstar, out.trace.records.back().f);
    }
    if (!std::isfinite(fstar)) fstar = 0.0;
  }

  ExperimentResult result;
  result.fstar_used = fstar;
  const std::filesystem::path dir(out_dir);
  std::string summary =
      "solver,seed,status,final_f,gap,oracle1_calls,oracle2_calls,wall_time_s,fail_flag\n";
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    const Task& task = tasks[ti];
    const Outcome& out = outcomes[ti];
    const std::string label = solver_label(task.solver);
    const std::string stem = label + "_s" + std::to_string(task.seed);

    const auto trace_path = dir / ("trace_" + stem + ".csv");
    bdetail::write_file_atomic(trace_path,
                               bdetail::trace_csv(out.trace, fstar, spec.wall_clock_csv));
    result.files.push_back(trace_path.string());
    const auto plot_calls = dir / ("plot_calls_" + stem + ".csv");
    bdetail::write_file_atomic(
        plot_calls, bdetail::plot_csv(out.trace, fstar, false, spec.wall_clock_csv));
    result.files.push_back(plot_calls.string());
    const auto plot_time = dir / ("plot_time_" + stem + ".csv");
    bdetail::write_file_atomic(
        plot_time, bdetail::plot_csv(out.trace, fstar, true, spec.wall_clock_csv));
    result.files.push_back(plot_time.string());

    SummaryRow row;
    row.solver = label;
    row.seed = task.seed;
    row.status = out.status;
    if (!out.trace.records.empty()) {
      const auto& last = out.trace.records.back();
      row.final_f = last.f;
      row.gap = last.f - fstar;
      row.oracle1_calls = last.oracle1_calls;
      row.oracle2_calls = last.oracle2_calls;
    } else {
      row.final_f = std::numeric_limits<double>::quiet_NaN();
      row.gap = std::numeric_limits<double>::quiet_NaN();
    }
    row.wall_time_s = spec.wall_clock_csv ? out.elapsed : 0.0;
    const bool success = !out.errored &&
                         (out.trace.status == RunStatus::ApproxStationary ||
                          (!out.trace.records.empty() && row.gap <= spec.target_gap));
    row.fail_flag = success ? 0 : 1;
    result.rows.push_back(row);

    summary += row.solver;
    summary += ',';
    summary += std::to_string(row.seed);
    summary += ',';
    summary += row.status;
    summary += ',';
    summary += bdetail::fmt_double(row.final_f);
    summary += ',';
    summary += bdetail::fmt_double(row.gap);
    summary += ',';
    summary += std::to_string(row.oracle1_calls);
    summary += ',';
    summary += std::to_string(row.oracle2_calls);
    summary += ',';
    summary += bdetail::fmt_double(row.wall_time_s);
    summary += ',';
    summary += std::to_string(row.fail_flag);
    summary += '\n';
  }
  const auto summary_path = dir / "summary.csv";
  bdetail::write_file_atomic(summary_path, summary);
  result.files.push_back(summary_path.string());
  return result;
}

// ---- CSV reading for the table and plot subcommands ----

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = cells;
      first = false;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

// Re-derives plot CSVs from existing trace files; gap columns are taken
// from the traces as written.
inline void emit_plot_data(const std::vector<std::string>& trace_files,
                           const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& file : trace_files) {
    CsvTable t = read_csv(file);
    std::size_t gap_col = 0, o1_col = 0, o2_col = 0, wall_col = 0;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (t.header[i] == "gap") gap_col = i;
      if (t.header[i] == "oracle1_calls") o1_col = i;
      if (t.header[i] == "oracle2_calls") o2_col = i;
      if (t.header[i] == "wall_time_s") wall_col = i;
    }
    std::string calls = "calls,log10_gap\n";
    std::string time = "time_s,log10_gap\n";
    for (const auto& row : t.rows) {
      const double gap = std::strtod(row[gap_col].c_str(), nullptr);
      const std::uint64_t c = std::strtoull(row[o1_col].c_str(), nullptr, 10) +
                              std::strtoull(row[o2_col].c_str(), nullptr, 10);
      calls += std::to_string(c) + ',' + bdetail::fmt_double(bdetail::clamped_log10_gap(gap)) + '\n';
      time += row[wall_col] + ',' + bdetail::fmt_double(bdetail::clamped_log10_gap(gap)) + '\n';
    }
    const std::filesystem::path src(file);
    std::string stem = src.stem().string();
    if (stem.rfind("trace_", 0) == 0) stem = stem.substr(6);
    bdetail::write_file_atomic(std::filesystem::path(out_dir) / ("plot_calls_" + stem + ".csv"),
                               calls);
    bdetail::write_file_atomic(std::filesystem::path(out_dir) / ("plot_time_" + stem + ".csv"),
                               time);
  }
}

// Aggregated view of a summary CSV: per solver, run and failure counts plus
// the mean oracle calls and worst gap over non-failed runs.
inline std::string render_table(const CsvTable& summary) {
  struct Agg {
    int runs = 0, fails = 0;
    double calls_sum = 0.0;
    int calls_n = 0;
    double worst_gap = 0.0;
  };
  std::vector<std::pair<std::string, Agg>> aggs;
  auto find = [&](const std::string& s) -> Agg& {
    for (auto& [name, a] : aggs)
      if (name == s) return a;
    aggs.push_back({s, Agg{}});
    return aggs.back().second;
  };
  std::size_t solver_c = 0, gap_c = 0, o1_c = 0, o2_c = 0, fail_c = 0;
  for (std::size_t i = 0; i < summary.header.size(); ++i) {
    if (summary.header[i] == "solver") solver_c = i;
    if (summary.header[i] == "gap") gap_c = i;
    if (summary.header[i] == "oracle1_calls") o1_c = i;
    if (summary.header[i] == "oracle2_calls") o2_c = i;
    if (summary.header[i] == "fail_flag") fail_c = i;
  }
  for (const auto& row : summary.rows) {
    Agg& a = find(row[solver_c]);
    a.runs += 1;
    const int fail = std::atoi(row[fail_c].c_str());
    if (fail) {
      a.fails += 1;
    } else {
      a.calls_sum += std::strtod(row[o1_c].c_str(), nullptr) +
                     std::strtod(row[o2_c].c_str(), nullptr);
      a.calls_n += 1;
      a.worst_gap = std::max(a.worst_gap, std::strtod(row[gap_c].c_str(), nullptr));
    }
  }
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-18s %6s %6s %14s %12s\n", "solver", "runs", "fails",
                "mean_calls", "worst_gap");
  out += buf;
  for (const auto& [name, a] : aggs) {
    if (a.calls_n > 0) {
      std::snprintf(buf, sizeof buf, "%-18s %6d %6d %14.4g %12.3g\n", name.c_str(), a.runs,
                    a.fails, a.calls_sum / a.calls_n, a.worst_gap);
    } else {
      std::snprintf(buf, sizeof buf, "%-18s %6d %6d %14s %12s\n", name.c_str(), a.runs,
                    a.fails, "-", "-");
    }
    out += buf;
  }
  return out;
}

// ---- spec JSON ----

inline nlohmann::json to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["family"] = family_label(spec.family);
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["d"] = spec.d;
  j["seeds"] = spec.seeds;
  std::vector<std::string> sv;
  for (SolverId s : spec.solvers) sv.push_back(solver_label(s));
  j["solvers"] = sv;
  j["max_calls"] = spec.max_calls;
  j["max_time_s"] = spec.max_time_s;
  j["target_gap"] = spec.target_gap;
  j["gs_samples"] = spec.gs_samples;
  j["x0"] = spec.x0_preset;
  j["wall_clock"] = spec.wall_clock_csv;
  j["config"] = {{"eps00", spec.cfg.eps00},       {"nu0", spec.cfg.nu0},
                 {"theta_eps", spec.cfg.theta_eps}, {"theta_nu", spec.cfg.theta_nu},
                 {"alpha", spec.cfg.alpha},        {"eps_tol", spec.cfg.eps_tol},
                 {"nu_tol", spec.cfg.nu_tol},      {"max_outer", spec.cfg.max_outer},
                 {"max_inner", spec.cfg.max_inner}};
  return j;
}

inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  spec.family = family_from_label(j.at("family").get<std::string>());
  if (j.contains("n")) spec.n = j.at("n").get<std::size_t>();
  if (j.contains("m")) spec.m = j.at("m").get<std::size_t>();
  if (j.contains("d")) spec.d = j.at("d").get<std::size_t>();
  spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  for (const auto& s : j.at("solvers"))
    spec.solvers.push_back(solver_from_label(s.get<std::string>()));
  if (j.contains("max_calls")) spec.max_calls = j.at("max_calls").get<std::uint64_t>();
  if (j.contains("max_time_s")) spec.max_time_s = j.at("max_time_s").get<double>();
  if (j.contains("target_gap")) spec.target_gap = j.at("target_gap").get<double>();
  if (j.contains("gs_samples")) spec.gs_samples = j.at("gs_samples").get<std::size_t>();
  if (j.contains("x0")) spec.x0_preset = j.at("x0").get<std::string>();
  if (j.contains("wall_clock")) spec.wall_clock_csv = j.at("wall_clock").get<bool>();
  if (j.contains("config")) {
    const auto& c = j.at("config");
    if (c.contains("eps00")) spec.cfg.eps00 = c.at("eps00").get<double>();
    if (c.contains("nu0")) spec.cfg.nu0 = c.at("nu0").get<double>();
    if (c.contains("theta_eps")) spec.cfg.theta_eps = c.at("theta_eps").get<double>();
    if (c.contains("theta_nu")) spec.cfg.theta_nu = c.at("theta_nu").get<double>();
    if (c.contains("alpha")) spec.cfg.alpha = c.at("alpha").get<double>();
    if (c.contains("eps_tol")) spec.cfg.eps_tol = c.at("eps_tol").get<double>();
    if (c.contains("nu_tol")) spec.cfg.nu_tol = c.at("nu_tol").get<double>();
    if (c.contains("max_outer")) spec.cfg.max_outer = c.at("max_outer").get<int>();
    if (c.contains("max_inner")) spec.cfg.max_inner = c.at("max_inner").get<int>();
  }
  return spec;
}

}  // namespace subgrad
