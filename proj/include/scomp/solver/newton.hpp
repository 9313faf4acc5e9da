#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "scomp/solver/trace.hpp"
#include "scomp/subsolver/fista.hpp"

namespace scomp {

enum class StepStrategy { NoLS, BtkLS, EBtkLS, FwLS };

std::string to_string(StepStrategy s);
StepStrategy parse_strategy(const std::string& name);

inline constexpr double kSigmaBarFull = 0.21922359359558486;  // (5-sqrt(17))/4
inline constexpr double kSigmaBarDamped = 0.23606797749978969;  // sqrt(5) - 2

struct NewtonConfig {
  double sigma = 0.2;              // quadratic-region gate, <= kSigmaBarFull
  double eps = 1e-6;               // decrement tolerance, in (0, sigma)
  int max_iter = 200;
  StepStrategy strategy = StepStrategy::NoLS;
  SubsolverControls sub{};         // tol 1e-8 for Newton inner solves
  int power_iters = 30;
  // Evaluate F each iteration even when the strategy does not need it.
  bool record_objective = true;
  int max_backtracks = 30;
  double armijo_c = 1e-4;
  int max_forward_probes = 6;

  void validate() const;
};

struct ProblemInstance {
  std::shared_ptr<const SmoothOracle> oracle;
  std::shared_ptr<const Regularizer> reg;
  Vec x0;
  // Optional structure-exploiting ||d||_{x}; defaults to the hess_vec form.
  std::function<double(const OraclePoint&, const Vec&)> decrement;

  double objective(const Vec& x, Counters* ct = nullptr) const;
};

struct SearchDirectionResult {
  Vec s;           // subproblem solution s^k
  Vec d;           // s^k - x^k
  double lambda = 0;  // ||d||_{x^k}
  double beta = 0;    // ||d||_{H_k}; equals lambda when H_k is the Hessian
  int inner_iters = 0;
  double residual = 0;
};

// Proximal-Newton direction at x_k: s = P^g_{x_k}(H x_k - grad f(x_k)).
SearchDirectionResult newton_direction(const ProblemInstance& prob,
                                       const Vec& x_k,
                                       const SubsolverControls& sub,
                                       int power_iters = 30,
                                       Counters* ct = nullptr);

// alpha* = 1 / (1 + lambda); the analytic damped step.
double analytic_damped_step(double lambda);

struct StepChoice {
  double alpha = 1.0;
  int evals_used = 0;
  bool degraded = false;  // no probed step decreased F; fell back to alpha*
  // F at the accepted point when a probe evaluated it (else NaN).
  double F_new = 0;
};

// Chooses alpha per strategy. `probe(alpha)` returns F(x + alpha d), +inf
// when infeasible. `F_cur` is F(x^k); `slope` the Armijo model decrease
// grad'd + g(s) - g(x) (only consumed by the backtracking strategies).
StepChoice select_step(StepStrategy strategy, double lambda, double sigma,
                       double F_cur, double slope,
                       const std::function<double(double)>& probe,
                       const NewtonConfig& cfg);

struct NewtonResult {
  Vec x;
  SolverTrace trace;
};

// Two-phase proximal-Newton solve (damped -> full) with analytic steps.
NewtonResult solve_newton(const ProblemInstance& prob,
                          const NewtonConfig& cfg);

// Dense BFGS update; keeps the secant equation H+ z = y exactly and
// preserves positive definiteness when y'z > 0 (else CurvatureError).
Mat bfgs_update(const Mat& H, const Vec& z, const Vec& y);

}  // namespace scomp
