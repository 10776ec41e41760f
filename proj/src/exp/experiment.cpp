#include "altgdmin/exp/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "altgdmin/core/io.hpp"
#include "altgdmin/core/rng.hpp"
#include "altgdmin/errors.hpp"
#include "altgdmin/fed/federated.hpp"
#include "altgdmin/problems/ground_truth.hpp"
#include "altgdmin/problems/measure.hpp"
#include "altgdmin/solvers/altmin.hpp"
#include "altgdmin/solvers/engine.hpp"
#include "altgdmin/util/parallel.hpp"

#include <algorithm>
#include <tuple>

namespace altgdmin {

namespace {

using json = nlohmann::ordered_json;

// Sub-streams of the experiment master seed.
constexpr std::uint64_t kGtStream = 1;
constexpr std::uint64_t kDataStream = 2;
constexpr std::uint64_t kSolverStream = 3;

ProblemKind parse_problem(const std::string& s) {
  if (s == "lrcs") return ProblemKind::kLrcs;
  if (s == "lrpr") return ProblemKind::kLrpr;
  if (s == "lrmc") return ProblemKind::kLrmc;
  throw ConfigError("unknown problem: " + s);
}

std::string problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kLrcs:
      return "lrcs";
    case ProblemKind::kLrpr:
      return "lrpr";
    case ProblemKind::kLrmc:
      return "lrmc";
  }
  return "?";
}

SolverChoice parse_solver(const std::string& s) {
  if (s == "altgdmin") return SolverChoice::kAltgdmin;
  if (s == "altmin") return SolverChoice::kAltmin;
  throw ConfigError("unknown solver: " + s);
}

std::string solver_name(SolverChoice s) {
  return s == SolverChoice::kAltgdmin ? "altgdmin" : "altmin";
}

double json_or_nan(double v) { return std::isfinite(v) ? v : kTraceNaN; }

}  // namespace

void ExperimentConfig::validate() const {
  if (n == 0 || q == 0 || r == 0)
    throw ConfigError("n, q, r must be positive");
  if (r > std::min(n, q)) throw ConfigError("r must be <= min(n, q)");
  if (!(kappa >= 1.0)) throw ConfigError("kappa must be >= 1");
  if (problem == ProblemKind::kLrmc) {
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
  } else {
    if (m == 0) throw ConfigError("m must be positive");
  }
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
  solver_config.validate();
  if (topology) {
    if (topology->gamma < 1 || topology->gamma > q)
      throw ConfigError("gamma must lie in [1, q]");
    if (solver == SolverChoice::kAltmin)
      throw ConfigError("the altmin baseline has no federated mode");
  }
  if (solver == SolverChoice::kAltmin && problem == ProblemKind::kLrpr)
    throw ConfigError("the altmin baseline covers lrcs and lrmc only");
  const std::size_t cells =
      std::max<std::size_t>(sweep_m.size(), 1) *
      std::max<std::size_t>(sweep_p.size(), 1) *
      std::max<std::size_t>(sweep_c_eta.size(), 1) *
      std::max<std::size_t>(sweep_seeds.size(), 1);
  if (cells > 10000) throw ConfigError("sweep too large (> 10^4 runs)");
}

ExperimentConfig load_experiment_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  try {
    ExperimentConfig cfg;
    if (j.value("schema_version", 1) != 1)
      throw ConfigError("unsupported schema_version");
    cfg.problem = parse_problem(j.at("problem").get<std::string>());
    cfg.n = j.at("n").get<std::size_t>();
    cfg.q = j.at("q").get<std::size_t>();
    cfg.r = j.at("r").get<std::size_t>();
    cfg.kappa = j.value("kappa", 1.0);
    cfg.m = j.value("m", std::size_t{0});
    cfg.p = j.value("p", 0.0);
    cfg.solver = parse_solver(j.value("solver", "altgdmin"));
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.noise_sigma = j.value("noise_sigma", 0.0);

    SolverConfig& sc = cfg.solver_config;
    sc.t_max = j.value("t_max", 500);
    sc.c_eta = j.value(
        "c_eta", cfg.problem == ProblemKind::kLrmc ? 0.5 : 0.4);
    sc.tol = j.value("tol", 1e-12);
    sc.sample_split = j.value("sample_split", false);
    sc.threads = j.value("threads", 1);
    sc.lrpr_inner_iters = j.value("lrpr_inner_iters", 2);
    sc.eta_scale = j.value("eta_scale", 1.0);
    const std::string policy = j.value("sigma_policy", "from_init");
    if (policy == "from_init")
      sc.sigma_policy = SigmaPolicy::kFromInit;
    else if (policy == "oracle")
      sc.sigma_policy = SigmaPolicy::kOracle;
    else
      throw ConfigError("sigma_policy must be from_init or oracle");
    if (j.contains("c_tilde") && !j["c_tilde"].is_null())
      sc.c_tilde = j["c_tilde"].get<double>();
    if (j.contains("mu") && !j["mu"].is_null())
      sc.mu = j["mu"].get<double>();

    if (j.contains("topology") && !j["topology"].is_null()) {
      TopologySpec topo;
      topo.gamma = j["topology"].value("gamma", std::size_t{1});
      const std::string pol = j["topology"].value("policy", "contiguous");
      if (pol == "contiguous")
        topo.policy = PartitionPolicy::kContiguous;
      else if (pol == "strided")
        topo.policy = PartitionPolicy::kStrided;
      else
        throw ConfigError("topology.policy must be contiguous or strided");
      cfg.topology = topo;
    }

    if (j.contains("sweep") && !j["sweep"].is_null()) {
      const json& sw = j["sweep"];
      if (sw.contains("m")) cfg.sweep_m = sw["m"].get<std::vector<std::size_t>>();
      if (sw.contains("p")) cfg.sweep_p = sw["p"].get<std::vector<double>>();
      if (sw.contains("c_eta"))
        cfg.sweep_c_eta = sw["c_eta"].get<std::vector<double>>();
      if (sw.contains("seeds"))
        cfg.sweep_seeds = sw["seeds"].get<std::vector<std::uint64_t>>();
    }
    if (j.contains("solvers")) {
      for (const auto& s : j["solvers"])
        cfg.compare_solvers.push_back(parse_solver(s.get<std::string>()));
    }
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

namespace {

struct Instance {
  GroundTruth gt;
  std::optional<LrcsData> lrcs;
  std::optional<LrprData> lrpr;
  std::optional<LrmcData> lrmc;
};

Instance make_instance(const ExperimentConfig& cfg) {
  Instance inst;
  GroundTruthParams params;
  params.n = cfg.n;
  params.q = cfg.q;
  params.r = cfg.r;
  params.kappa = cfg.kappa;
  params.seed = derive_seed(cfg.seed, kGtStream);
  inst.gt = generate_ground_truth(params);
  const std::uint64_t data_seed = derive_seed(cfg.seed, kDataStream);
  switch (cfg.problem) {
    case ProblemKind::kLrcs:
      inst.lrcs = lrcs_measure(inst.gt, cfg.m, data_seed, cfg.noise_sigma);
      break;
    case ProblemKind::kLrpr:
      inst.lrpr = lrpr_measure(inst.gt, cfg.m, data_seed);
      break;
    case ProblemKind::kLrmc:
      inst.lrmc = lrmc_sample(inst.gt, cfg.p, data_seed, cfg.noise_sigma);
      break;
  }
  return inst;
}

ExperimentOutcome solve_instance(const ExperimentConfig& cfg,
                                 const Instance& inst, MessageLog* log_out) {
  ExperimentOutcome out;
  SolverConfig sc = cfg.solver_config;
  sc.seed = derive_seed(cfg.seed, kSolverStream);
  const GroundTruth* oracle = &inst.gt;

  try {
    if (cfg.topology) {
      const FederationTopology topo =
          partition_columns(cfg.q, cfg.topology->gamma, cfg.topology->policy);
      FederatedResult fed = [&] {
        switch (cfg.problem) {
          case ProblemKind::kLrcs:
            return run_federated(*inst.lrcs, cfg.r, sc, topo, oracle, true);
          case ProblemKind::kLrpr:
            return run_federated(*inst.lrpr, cfg.r, sc, topo, oracle, true);
          default:
            return run_federated(*inst.lrmc, cfg.r, sc, topo, oracle, true);
        }
      }();
      out.trace = std::move(fed.trace);
      out.estimate = std::move(fed.estimate);
      out.federated = true;
      out.message_bytes = fed.log.total_bytes();
      out.message_elements = fed.log.total_elements();
      if (log_out) *log_out = std::move(fed.log);
    } else if (cfg.solver == SolverChoice::kAltmin) {
      SolveResult res = cfg.problem == ProblemKind::kLrcs
                            ? altmin_lrcs(*inst.lrcs, cfg.r, sc, oracle)
                            : altmin_lrmc(*inst.lrmc, cfg.r, sc, oracle);
      out.trace = std::move(res.trace);
      out.estimate = std::move(res.estimate);
    } else {
      SolveResult res = [&] {
        switch (cfg.problem) {
          case ProblemKind::kLrcs:
            return altgdmin_lrcs(*inst.lrcs, cfg.r, sc, oracle);
          case ProblemKind::kLrpr:
            return altgdmin_lrpr(*inst.lrpr, cfg.r, sc, oracle);
          default:
            return altgdmin_lrmc(*inst.lrmc, cfg.r, sc, oracle);
        }
      }();
      out.trace = std::move(res.trace);
      out.estimate = std::move(res.estimate);
    }
  } catch (const Error& e) {
    out.error = e.what();
    out.final_error = kTraceNaN;
    return out;
  }

  out.final_error = cfg.problem == ProblemKind::kLrmc
                        ? out.trace.final_stats.rel_fro_err
                        : out.trace.final_stats.max_col_err;
  out.success = std::isfinite(out.final_error) &&
                out.final_error <= kSuccessThreshold;
  return out;
}

json summary_json(const ExperimentConfig& cfg, const Instance& inst,
                  const ExperimentOutcome& out) {
  json s;
  s["schema_version"] = 1;
  s["problem"] = problem_name(cfg.problem);
  s["solver"] = solver_name(cfg.solver);
  s["n"] = cfg.n;
  s["q"] = cfg.q;
  s["r"] = cfg.r;
  s["kappa_target"] = cfg.kappa;
  s["kappa"] = inst.gt.kappa;
  s["mu"] = inst.gt.mu;
  if (cfg.problem == ProblemKind::kLrmc)
    s["p"] = cfg.p;
  else
    s["m"] = cfg.m;
  s["seed"] = cfg.seed;
  s["federated"] = out.federated;
  if (cfg.topology) s["gamma"] = cfg.topology->gamma;
  s["iterations"] = out.trace.iterations();
  s["stopped_by_tol"] = out.trace.stopped_by_tol;
  json init;
  init["se2"] = json_or_nan(out.trace.init_se2);
  init["alpha"] = json_or_nan(out.trace.alpha);
  init["power_iters"] = out.trace.power_iters;
  init["sigma_estimate"] = json_or_nan(out.trace.sigma_estimate);
  s["init"] = init;
  const FinalStats& fs = out.trace.final_stats;
  json fin;
  fin["objective"] = json_or_nan(fs.objective);
  fin["residual"] = json_or_nan(fs.residual);
  fin["max_col_err"] = json_or_nan(fs.max_col_err);
  fin["rel_fro_err"] = json_or_nan(fs.rel_fro_err);
  fin["se2"] = json_or_nan(fs.se2);
  fin["sef"] = json_or_nan(fs.sef);
  s["final"] = fin;
  json totals;
  totals["flops"] = out.trace.total_flops();
  totals["message_elements"] = out.message_elements;
  totals["message_bytes"] = out.message_bytes;
  s["totals"] = totals;
  s["final_error"] = json_or_nan(out.final_error);
  s["success"] = out.success;
  s["error"] = out.error.empty() ? json(nullptr) : json(out.error);
  return s;
}

}  // namespace

ExperimentOutcome run_experiment_in_memory(const ExperimentConfig& cfg) {
  cfg.validate();
  const Instance inst = make_instance(cfg);
  return solve_instance(cfg, inst, nullptr);
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                 const std::string& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  const Instance inst = make_instance(cfg);
  MessageLog log;
  ExperimentOutcome out = solve_instance(cfg, inst, &log);
  write_text_file(out_dir + "/trace.csv", out.trace.to_csv());
  if (out.federated)
    write_text_file(out_dir + "/messages.csv", log.to_csv());
  write_text_file(out_dir + "/summary.json",
                  summary_json(cfg, inst, out).dump(2) + "\n");
  if (out.error.empty() && out.estimate.b.size() > 0)
    save_factor_estimate(out_dir + "/estimate", out.estimate);
  return out;
}

namespace {

// Status strings may carry error messages; keep the CSV single-token.
std::string csv_safe(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

}  // namespace

std::string SweepResult::csv() const {
  CsvWriter w("m,p,c_eta,seed,final_error,iterations,success,flops,bytes,status");
  for (const SweepCell& c : cells) {
    w.add_cell(c.m == 0 ? std::string() : std::to_string(c.m));
    w.add_cell(c.p == 0.0 ? std::string() : CsvWriter::format_double(c.p));
    w.add_cell(c.c_eta);
    w.add_cell(c.seed);
    w.add_cell(c.final_error);
    w.add_cell(static_cast<std::int64_t>(c.iterations));
    w.add_cell(static_cast<std::int64_t>(c.success ? 1 : 0));
    w.add_cell(c.flops);
    w.add_cell(c.bytes);
    w.add_cell(csv_safe(c.status));
    w.end_row();
  }
  return w.str();
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  std::vector<std::size_t> ms =
      cfg.sweep_m.empty() ? std::vector<std::size_t>{cfg.m} : cfg.sweep_m;
  std::vector<double> ps =
      cfg.sweep_p.empty() ? std::vector<double>{cfg.p} : cfg.sweep_p;
  std::vector<double> etas = cfg.sweep_c_eta.empty()
                                 ? std::vector<double>{cfg.solver_config.c_eta}
                                 : cfg.sweep_c_eta;
  std::vector<std::uint64_t> seeds =
      cfg.sweep_seeds.empty() ? std::vector<std::uint64_t>{cfg.seed}
                              : cfg.sweep_seeds;

  // Cells are isolated pure functions of their configs, so they may run in
  // parallel with single-threaded solves; the output is sorted afterwards.
  std::vector<ExperimentConfig> cell_cfgs;
  for (std::size_t mv : ms) {
    for (double pv : ps) {
      for (double ev : etas) {
        for (std::uint64_t sv : seeds) {
          ExperimentConfig cell_cfg = cfg;
          cell_cfg.sweep_m.clear();
          cell_cfg.sweep_p.clear();
          cell_cfg.sweep_c_eta.clear();
          cell_cfg.sweep_seeds.clear();
          cell_cfg.m = mv;
          cell_cfg.p = pv;
          cell_cfg.solver_config.c_eta = ev;
          cell_cfg.seed = sv;
          cell_cfg.solver_config.threads = 1;
          cell_cfgs.push_back(std::move(cell_cfg));
        }
      }
    }
  }
  SweepResult result;
  result.cells.resize(cell_cfgs.size());
  parallel_for(cell_cfgs.size(), cfg.solver_config.threads,
               [&](std::size_t i) {
                 const ExperimentConfig& cell_cfg = cell_cfgs[i];
                 SweepCell cell;
                 cell.m =
                     cfg.problem == ProblemKind::kLrmc ? 0 : cell_cfg.m;
                 cell.p =
                     cfg.problem == ProblemKind::kLrmc ? cell_cfg.p : 0.0;
                 cell.c_eta = cell_cfg.solver_config.c_eta;
                 cell.seed = cell_cfg.seed;
                 try {
                   const ExperimentOutcome out =
                       run_experiment_in_memory(cell_cfg);
                   cell.final_error = out.final_error;
                   cell.iterations = out.trace.iterations();
                   cell.success = out.success;
                   cell.flops = out.trace.total_flops();
                   cell.bytes = out.message_bytes;
                   cell.status = out.error.empty() ? "ok" : out.error;
                 } catch (const Error& e) {
                   cell.final_error = kTraceNaN;
                   cell.status = e.what();
                 }
                 result.cells[i] = std::move(cell);
               });
  std::stable_sort(result.cells.begin(), result.cells.end(),
                   [](const SweepCell& a, const SweepCell& b) {
                     return std::tie(a.m, a.p, a.c_eta, a.seed) <
                            std::tie(b.m, b.p, b.c_eta, b.seed);
                   });
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/sweep.csv", result.csv());
  }
  return result;
}

std::string CompareResult::csv() const {
  CsvWriter w(
      "solver,seed,iterations,final_error,flops,bytes,per_round_comm_elements");
  for (const CompareRow& r : rows) {
    w.add_cell(r.solver);
    w.add_cell(r.seed);
    w.add_cell(static_cast<std::int64_t>(r.iterations));
    w.add_cell(r.final_error);
    w.add_cell(r.flops);
    w.add_cell(r.bytes);
    w.add_cell(r.per_round_comm_elements);
    w.end_row();
  }
  return w.str();
}

CompareResult run_compare(const ExperimentConfig& cfg,
                          const std::string& out_dir) {
  cfg.validate();
  if (cfg.compare_solvers.size() < 2)
    throw ConfigError("compare needs at least two solvers");
  std::vector<std::uint64_t> seeds =
      cfg.sweep_seeds.empty() ? std::vector<std::uint64_t>{cfg.seed}
                              : cfg.sweep_seeds;
  CompareResult result;
  for (const std::uint64_t seed : seeds) {
    for (const SolverChoice solver : cfg.compare_solvers) {
      ExperimentConfig run_cfg = cfg;
      run_cfg.compare_solvers.clear();
      run_cfg.sweep_seeds.clear();
      run_cfg.seed = seed;
      run_cfg.solver = solver;
      if (solver == SolverChoice::kAltmin) run_cfg.topology.reset();
      run_cfg.validate();
      const ExperimentOutcome out = run_experiment_in_memory(run_cfg);
      CompareRow row;
      row.solver = solver_name(solver);
      row.seed = seed;
      row.iterations = out.trace.iterations();
      row.final_error = out.final_error;
      row.flops = out.trace.total_flops();
      row.bytes = out.message_bytes;
      std::size_t omega = 0;
      if (cfg.problem == ProblemKind::kLrmc) {
        // |Omega| is a property of the dataset; regenerate the mask count.
        const Instance inst = make_instance(run_cfg);
        omega = inst.lrmc->omega_size();
      }
      row.per_round_comm_elements = per_round_comm_elements(
          cfg.problem, solver == SolverChoice::kAltmin, cfg.n, cfg.r, omega,
          cfg.topology ? cfg.topology->gamma : 1);
      result.rows.push_back(std::move(row));
    }
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/comparison.csv", result.csv());
  }
  return result;
}

std::string inspect_trace(const std::string& trace_csv_path) {
  const std::string raw = read_text_file(trace_csv_path);
  std::istringstream in(raw);
  std::string header;
  if (!std::getline(in, header) ||
      header != "iter,se2,sef,max_col_err,objective,flops,seconds")
    throw IoError("not a trace.csv (unexpected header)");
  std::string line, last;
  std::size_t rows = 0;
  bool has_init_row = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (rows == 0 && line.rfind("0,", 0) == 0) has_init_row = true;
    last = line;
    ++rows;
  }
  if (rows == 0) throw IoError("trace.csv has no rows");
  std::ostringstream out;
  out << "rows: " << rows << (has_init_row ? " (init row present)" : "")
      << "\n";
  // Split the last row for a compact summary.
  std::vector<std::string> cells;
  std::istringstream ls(last);
  std::string cell;
  while (std::getline(ls, cell, ',')) cells.push_back(cell);
  if (cells.size() != 7) throw IoError("trace.csv has malformed rows");
  out << "last iter: " << cells[0] << "\n"
      << "se2: " << cells[1] << "\n"
      << "sef: " << cells[2] << "\n"
      << "max_col_err: " << cells[3] << "\n"
      << "objective: " << cells[4] << "\n"
      << "total flops: " << cells[5] << "\n";
  return out.str();
}

}  // namespace altgdmin
