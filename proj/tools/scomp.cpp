// scomp: solve and benchmark composite self-concordant problems.

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "scomp/apps/graph.hpp"
#include "scomp/apps/hetlasso.hpp"
#include "scomp/apps/poisson.hpp"
#include "scomp/io/io.hpp"
#include "scomp/kernels.hpp"
#include "scomp/oracles/logdet.hpp"
#include "scomp/solver/trace.hpp"

namespace {

using namespace scomp;

struct KvSpec {
  std::map<std::string, double> kv;

  double get(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return kv.count(key) != 0; }
};

KvSpec parse_kv(const std::string& text) {
  KvSpec spec;
  if (text.empty()) return spec;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw DomainError("bad --synthetic entry (want k=v): " + item);
    }
    try {
      spec.kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw DomainError("bad --synthetic value in: " + item);
    }
  }
  return spec;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    seeds.push_back(static_cast<std::uint64_t>(std::stoull(item)));
  }
  return seeds;
}

int thread_cap() {
  if (const char* env = std::getenv("SCOMP_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void run_parallel(const std::vector<std::function<void()>>& jobs) {
  const int workers =
      std::min<int>(thread_cap(), static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (const auto& j : jobs) j();
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        jobs[i]();
      }
    });
  }
  for (auto& t : pool) t.join();
}

struct RunSpec {
  bool bench_identity_start = false;  // comparison protocol: theta0 = I
  std::string problem;
  std::string method;
  std::string strategy = "nols";
  std::string input;
  std::string target;
  std::string synthetic;
  std::string out;
  std::string format = "json";
  double rho = 0.01;
  double eps = 1e-6;
  int max_iter = 0;  // 0 -> per-method default
  std::uint64_t seed = 1;
  bool seed_set = false;
  bool record_objective = false;
};

GraphProblem load_graph_problem(const RunSpec& rs) {
  GraphProblem gp;
  if (!rs.input.empty()) {
    gp = make_graph_problem(read_matrix_market(rs.input), rs.rho);
  } else {
    const KvSpec kv = parse_kv(rs.synthetic);
    const Index p = static_cast<Index>(kv.get("p", 10));
    const double density = kv.get("density", 0.2);
    const Index samples = static_cast<Index>(kv.get("samples", 0));
    const std::uint64_t seed =
        rs.seed_set ? rs.seed : static_cast<std::uint64_t>(kv.get("seed", 1));
    gp = synth_gmrf(p, density, samples, seed, rs.rho);
  }
  if (rs.bench_identity_start) {
    gp.theta0 = Mat::Identity(gp.sigma_hat.rows(), gp.sigma_hat.cols());
  }
  return gp;
}

PoissonProblem load_poisson_problem(const RunSpec& rs) {
  const KvSpec kv = parse_kv(rs.synthetic);
  const std::uint64_t seed =
      rs.seed_set ? rs.seed : static_cast<std::uint64_t>(kv.get("seed", 1));
  const int blur = static_cast<int>(kv.get("blur", 1));
  const double intensity = kv.get("intensity", 1000.0);
  if (!rs.input.empty()) {
    const PgmImage img = read_pgm(rs.input);
    Vec x_true = img.pixels;
    if (kv.has("intensity") && img.pixels.maxCoeff() > 0) {
      x_true *= intensity / img.pixels.maxCoeff();
    }
    return synth_poisson(img.height, img.width, blur, intensity, seed, rs.rho,
                         &x_true);
  }
  const Index size = static_cast<Index>(kv.get("size", 32));
  const Index h = static_cast<Index>(kv.get("h", size));
  const Index w = static_cast<Index>(kv.get("w", size));
  return synth_poisson(h, w, blur, intensity, seed, rs.rho);
}

HetLassoProblem load_hetlasso_problem(const RunSpec& rs) {
  if (!rs.input.empty()) {
    if (rs.target.empty()) {
      throw DomainError("hetlasso needs --target (CSV with the responses)");
    }
    const Mat X = read_csv(rs.input).data;
    const Mat yt = read_csv(rs.target).data;
    if (yt.cols() != 1) throw DomainError("--target must be a single column");
    return make_hetlasso_problem(X, yt.col(0), rs.rho);
  }
  const KvSpec kv = parse_kv(rs.synthetic);
  const Index n = static_cast<Index>(kv.get("n", 100));
  const Index p = static_cast<Index>(kv.get("p", 300));
  const Index nnz = static_cast<Index>(kv.get("nnz", std::min<Index>(p, 10)));
  const double noise = kv.get("noise", 0.1);
  const std::uint64_t seed =
      rs.seed_set ? rs.seed : static_cast<std::uint64_t>(kv.get("seed", 1));
  return synth_hetlasso(n, p, nnz, noise, seed, rs.rho);
}

ProblemInstance graph_generic_instance(const GraphProblem& gp) {
  ProblemInstance inst;
  inst.oracle = std::make_shared<LogDetOracle>(gp.sigma_hat);
  inst.reg = std::make_shared<L1Reg>(gp.rho);
  inst.x0 = Eigen::Map<const Vec>(gp.theta0.data(), gp.theta0.size());
  return inst;
}

SolverTrace dispatch_solve(const RunSpec& rs) {
  if (rs.problem == "graphlasso") {
    const GraphProblem gp = load_graph_problem(rs);
    if (rs.method == "dpngs") {
      DpngsConfig cfg;
      cfg.eps = rs.eps;
      cfg.strategy = parse_strategy(rs.strategy);
      cfg.max_iter = rs.max_iter > 0 ? rs.max_iter : 200;
      cfg.record_objective = rs.record_objective;
      return dpngs_solve(gp, cfg).trace;
    }
    if (rs.method == "proxgrad1") {
      ProxGrad1Config cfg;
      cfg.eps = rs.eps;
      cfg.max_iter = rs.max_iter > 0 ? rs.max_iter : 10000;
      return proxgrad_graph_solve(gp, cfg).trace;
    }
    if (rs.method == "newton") {
      NewtonConfig cfg;
      cfg.eps = rs.eps;
      cfg.strategy = parse_strategy(rs.strategy);
      cfg.max_iter = rs.max_iter > 0 ? rs.max_iter : 200;
      cfg.record_objective = true;
      return solve_newton(graph_generic_instance(gp), cfg).trace;
    }
    if (rs.method == "grad") {
      GradConfig cfg;
      cfg.eps = rs.eps;
      cfg.max_iter = rs.max_iter > 0 ? rs.max_iter : 10000;
      return solve_grad(graph_generic_instance(gp), cfg).trace;
    }
    throw DomainError("problem graphlasso supports methods: dpngs, proxgrad1, "
                      "newton, grad (got " + rs.method + ")");
  }
  if (rs.problem == "poisson") {
    if (rs.method != "proxgrad2" && rs.method != "proxgrad2g") {
      throw DomainError("problem poisson supports methods: proxgrad2, "
                        "proxgrad2g (got " + rs.method + ")");
    }
    const PoissonProblem pp = load_poisson_problem(rs);
    GradConfig cfg;
    cfg.eps = rs.eps;
    cfg.max_iter = rs.max_iter > 0 ? rs.max_iter : 2000;
    return poisson_solve(pp, cfg, rs.method == "proxgrad2g").trace;
  }
  if (rs.problem == "hetlasso") {
    if (rs.method != "hetlasso" && rs.method != "grad") {
      throw DomainError("problem hetlasso supports methods: hetlasso, grad "
                        "(got " + rs.method + ")");
    }
    const HetLassoProblem hp = load_hetlasso_problem(rs);
    GradConfig cfg;
    cfg.eps = rs.eps;
    cfg.max_iter = rs.max_iter > 0 ? rs.max_iter : 10000;
    return hetlasso_solve(hp, cfg).trace;
  }
  throw DomainError("unknown problem: " + rs.problem +
                    " (expected graphlasso, poisson, or hetlasso)");
}

void print_summary(const SolverTrace& tr) {
  std::ostringstream os;
  os.precision(12);
  const TraceRecord last = tr.records.empty() ? TraceRecord{}
                                              : tr.records.back();
  os << "summary method=" << tr.method << " exit=" << tr.exit_code
     << " iters=" << (tr.records.empty() ? 0 : last.k)
     << " F=" << last.F << " decrement=" << tr.final_decrement
     << " n_chol=" << last.n_chol << " n_matmul=" << last.n_matmul
     << " n_prox=" << last.n_prox << " n_feval=" << last.n_feval
     << " wall_ms=" << last.wall_ms;
  std::cout << os.str() << std::endl;
}

int cmd_solve(const RunSpec& rs) {
  const SolverTrace tr = dispatch_solve(rs);
  if (!rs.out.empty()) write_trace(tr, rs.out, rs.format);
  print_summary(tr);
  return tr.exit_code;
}

struct AggRow {
  double iters = 0, chol = 0, mm = 0, feval = 0, wall = 0;
  int runs = 0, failures = 0;
};

int cmd_compare_ls(const RunSpec& rs, const std::string& strategies_text,
                   const std::string& seeds_text) {
  std::vector<std::string> strategies;
  {
    std::istringstream is(strategies_text);
    std::string item;
    while (std::getline(is, item, ',')) {
      if (!item.empty()) strategies.push_back(item);
    }
  }
  if (strategies.size() < 2) {
    throw DomainError("compare-ls needs at least two --strategies");
  }
  std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);
  if (seeds.empty()) seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  std::vector<AggRow> rows(strategies.size());
  std::mutex mu;
  std::vector<std::function<void()>> jobs;
  for (size_t si = 0; si < strategies.size(); ++si) {
    for (const std::uint64_t seed : seeds) {
      jobs.push_back([&, si, seed]() {
        RunSpec local = rs;
        local.method = "dpngs";
        local.bench_identity_start = true;
        local.strategy = strategies[si];
        local.seed = seed;
        local.seed_set = true;
        try {
          const SolverTrace tr = dispatch_solve(local);
          const TraceRecord last = tr.records.back();
          std::lock_guard<std::mutex> lock(mu);
          rows[si].iters += last.k;
          rows[si].chol += static_cast<double>(last.n_chol);
          rows[si].mm += static_cast<double>(last.n_matmul);
          rows[si].feval += static_cast<double>(last.n_feval);
          rows[si].wall += last.wall_ms;
          rows[si].runs += 1;
          if (tr.exit_code != 0) rows[si].failures += 1;
        } catch (const std::exception&) {
          std::lock_guard<std::mutex> lock(mu);
          rows[si].failures += 1;
        }
      });
    }
  }
  run_parallel(jobs);

  CsvTable table;
  table.columns = {"strategy_id", "avg_iter",  "avg_chol", "avg_mm",
                   "avg_feval",   "avg_wall_ms", "failures"};
  table.data.resize(static_cast<Index>(strategies.size()), 7);
  std::cout << "strategy,avg_iter,avg_chol,avg_mm,avg_feval,avg_wall_ms,"
               "failures\n";
  for (size_t si = 0; si < strategies.size(); ++si) {
    const AggRow& r = rows[si];
    const double denom = r.runs > 0 ? r.runs : 1;
    table.data(static_cast<Index>(si), 0) = static_cast<double>(si);
    table.data(static_cast<Index>(si), 1) = r.iters / denom;
    table.data(static_cast<Index>(si), 2) = r.chol / denom;
    table.data(static_cast<Index>(si), 3) = r.mm / denom;
    table.data(static_cast<Index>(si), 4) = r.feval / denom;
    table.data(static_cast<Index>(si), 5) = r.wall / denom;
    table.data(static_cast<Index>(si), 6) = r.failures;
    std::cout << strategies[si] << ',' << r.iters / denom << ','
              << r.chol / denom << ',' << r.mm / denom << ','
              << r.feval / denom << ',' << r.wall / denom << ','
              << r.failures << "\n";
  }
  if (!rs.out.empty()) {
    // Strategy names ride along as a comment-free id column; the stdout
    // table carries the names.
    write_csv(table, rs.out);
  }
  return 0;
}

int cmd_compare_sub(const RunSpec& rs, const std::string& seeds_text) {
  std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);
  if (seeds.empty()) seeds = {1, 2, 3, 4, 5};
  const std::vector<std::string> subs = {"dual", "primal"};
  std::vector<AggRow> rows(subs.size());
  std::mutex mu;
  std::vector<std::function<void()>> jobs;
  for (size_t si = 0; si < subs.size(); ++si) {
    for (const std::uint64_t seed : seeds) {
      jobs.push_back([&, si, seed]() {
        RunSpec local = rs;
        local.bench_identity_start = true;
        local.method = si == 0 ? "dpngs" : "newton";
        local.seed = seed;
        local.seed_set = true;
        try {
          const SolverTrace tr = dispatch_solve(local);
          const TraceRecord last = tr.records.back();
          std::lock_guard<std::mutex> lock(mu);
          rows[si].iters += last.k;
          rows[si].chol += static_cast<double>(last.n_chol);
          rows[si].mm += static_cast<double>(last.n_matmul);
          rows[si].feval += static_cast<double>(last.n_feval);
          rows[si].wall += last.wall_ms;
          rows[si].runs += 1;
          if (tr.exit_code != 0) rows[si].failures += 1;
        } catch (const std::exception&) {
          std::lock_guard<std::mutex> lock(mu);
          rows[si].failures += 1;
        }
      });
    }
  }
  run_parallel(jobs);

  std::cout << "subsolver,avg_iter,avg_chol,avg_mm,avg_feval,avg_wall_ms,"
               "failures\n";
  CsvTable table;
  table.columns = {"subsolver_id", "avg_iter",  "avg_chol", "avg_mm",
                   "avg_feval",    "avg_wall_ms", "failures"};
  table.data.resize(static_cast<Index>(subs.size()), 7);
  for (size_t si = 0; si < subs.size(); ++si) {
    const AggRow& r = rows[si];
    const double denom = r.runs > 0 ? r.runs : 1;
    table.data(static_cast<Index>(si), 0) = static_cast<double>(si);
    table.data(static_cast<Index>(si), 1) = r.iters / denom;
    table.data(static_cast<Index>(si), 2) = r.chol / denom;
    table.data(static_cast<Index>(si), 3) = r.mm / denom;
    table.data(static_cast<Index>(si), 4) = r.feval / denom;
    table.data(static_cast<Index>(si), 5) = r.wall / denom;
    table.data(static_cast<Index>(si), 6) = r.failures;
    std::cout << subs[si] << ',' << r.iters / denom << ',' << r.chol / denom
              << ',' << r.mm / denom << ',' << r.feval / denom << ','
              << r.wall / denom << ',' << r.failures << "\n";
  }
  if (!rs.out.empty()) write_csv(table, rs.out);
  return 0;
}

int cmd_export(const std::string& in, const std::string& format,
               const std::string& out) {
  const SolverTrace tr = read_trace(in);
  if (out.empty()) {
    std::cout << (format == "json" ? trace_to_json(tr) : trace_to_csv(tr));
  } else {
    write_trace(tr, out, format);
  }
  return 0;
}

std::string error_slug(const std::exception& e) {
  const std::string what = e.what();
  if (what.rfind("input-not-found", 0) == 0) return "input-not-found";
  if (dynamic_cast<const IoError*>(&e)) return "io-error";
  if (dynamic_cast<const DomainError*>(&e)) return "invalid-spec";
  if (dynamic_cast<const SubsolverFailure*>(&e)) return "subsolver-failure";
  if (dynamic_cast<const StepConditionFailure*>(&e)) return "step-condition";
  return "solver-error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composite self-concordant minimization toolkit"};
  app.require_subcommand(1);

  RunSpec rs;
  std::string strategies = "nols,btkls,e-btkls,fwls";
  std::string seeds;
  std::string export_in, export_format = "csv", export_out;

  auto add_common = [&](CLI::App* cmd, bool need_method) {
    cmd->add_option("--problem", rs.problem,
                    "graphlasso | poisson | hetlasso")->required();
    if (need_method) {
      cmd->add_option("--method", rs.method,
                      "newton | grad | dpngs | proxgrad1 | proxgrad2 | "
                      "proxgrad2g | hetlasso")->required();
    }
    cmd->add_option("--strategy", rs.strategy, "nols|btkls|e-btkls|fwls");
    cmd->add_option("--rho", rs.rho, "regularization weight");
    cmd->add_option("--eps", rs.eps, "termination tolerance");
    cmd->add_option("--max-iter", rs.max_iter, "iteration budget");
    cmd->add_option("--input", rs.input, "problem data file");
    cmd->add_option("--target", rs.target, "response CSV (hetlasso)");
    cmd->add_option("--synthetic", rs.synthetic, "k=v,... generator spec");
    cmd->add_option("--seed", rs.seed, "generator seed")
        ->each([&](const std::string&) { rs.seed_set = true; });
    cmd->add_option("--out", rs.out, "artifact output path");
    cmd->add_option("--format", rs.format, "json | csv");
    cmd->add_flag("--record-objective", rs.record_objective,
                  "evaluate F every iteration (costs factorizations)");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  add_common(solve, true);

  CLI::App* cls = app.add_subcommand("compare-ls",
                                     "step-size strategy comparison");
  add_common(cls, false);
  cls->add_option("--strategies", strategies, "comma list, >= 2");
  cls->add_option("--seeds", seeds, "comma list of seeds");

  CLI::App* csub = app.add_subcommand("compare-sub",
                                      "dual vs primal subsolver comparison");
  add_common(csub, false);
  csub->add_option("--seeds", seeds, "comma list of seeds");

  CLI::App* info = app.add_subcommand("info", "build and dispatch report");

  CLI::App* exp = app.add_subcommand("export", "trace format conversion");
  exp->add_option("--in", export_in, "trace file (json or csv)")->required();
  exp->add_option("--format", export_format, "json | csv")->required();
  exp->add_option("--out", export_out, "output path (stdout when absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (info->parsed()) {
      std::cout << "kernels active=" << kernels::active().name
                << " available=";
      bool first = true;
      for (const auto* tbl : kernels::available()) {
        std::cout << (first ? "" : ",") << tbl->name;
        first = false;
      }
      std::cout << "\nthreads cap=" << thread_cap() << std::endl;
      return 0;
    }
    if (solve->parsed()) return cmd_solve(rs);
    if (cls->parsed()) return cmd_compare_ls(rs, strategies, seeds);
    if (csub->parsed()) return cmd_compare_sub(rs, seeds);
    if (exp->parsed()) return cmd_export(export_in, export_format, export_out);
  } catch (const std::exception& e) {
    std::cerr << "error reason=" << error_slug(e) << " detail=\"" << e.what()
              << "\"" << std::endl;
    return 1;
  }
  return 1;
}
