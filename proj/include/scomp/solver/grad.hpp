#pragma once

#include "scomp/solver/newton.hpp"

namespace scomp {

enum class GradTermination {
  RelDirNorm,       // ||d|| <= eps * max(1, ||x||)   (default, scale-robust)
  AbsDirNorm,       // ||d|| <= eps                   (the bare criterion)
  DirNormOverSqrtL  // ||d|| / sqrt(L) <= eps         (Poisson reconstruction)
};

struct GradConfig {
  double eps = 1e-6;
  GradTermination term = GradTermination::RelDirNorm;
  int max_iter = 10000;
  double L_min = 1e-12;  // floor underline-L > 0
  double L0 = 0;         // 0 -> single power-method probe of the Hessian at x0
  double L_max = 1e12;
  bool bb_init = true;   // Barzilai-Borwein initialization of L_k
  bool greedy = false;   // trial-point modification
  int max_halvings = 40;
  int power_iters = 20;
  bool record_objective = true;
  bool keep_iterates = false;  // store iterates/directions for diagnostics

  void validate() const;
};

// alpha = min( beta^2 / (lambda (lambda + beta^2)), 1 ). lambda must be
// positive; the caller has already fired termination on zero directions.
double grad_step_size(double lambda, double beta);

struct ChooseLkResult {
  double L = 0;
  SearchDirectionResult dir;  // lambda = ||d||_x, beta = sqrt(L)||d||
  int halvings = 0;
};

// Halve L from L_init until lambda >= 1 or lambda^2/beta^2 + lambda >= 1
// (the relaxed form of L_k <= sigma_k). Needs no objective evaluations.
// Throws StepConditionFailure when the halving budget runs out.
ChooseLkResult choose_Lk(const ProblemInstance& prob, const OraclePoint& pt,
                         const Vec& x_k, double L_init, const GradConfig& cfg,
                         ProxWorkspace* ws = nullptr, Counters* ct = nullptr);

// Greedy trial point: returns s_k when it is feasible and beats the convex
// step x_hat = x_k + alpha (s_k - x_k); at most two objective evaluations.
// On return F_next holds the objective at the chosen point.
Vec greedy_update(const ProblemInstance& prob, const Vec& x_k, const Vec& s_k,
                  double alpha, double* F_next = nullptr,
                  Counters* ct = nullptr);

struct GradResult {
  Vec x;
  SolverTrace trace;
  Vec ergodic_x;   // step-size weighted average of visited iterates
  double S = 0;    // sum of steps alpha_j
  // Populated when cfg.keep_iterates: per recorded iteration.
  std::vector<Vec> iterates;
  std::vector<Vec> directions;
  std::vector<double> alphas;
  std::vector<double> Ls;
};

GradResult solve_grad(const ProblemInstance& prob, const GradConfig& cfg);

// Restricted approximation gap c_res = ||(L I - H(x*)) d||*_{x*} / ||d||_{x*}
// and the empirical contraction of ||x^k - x*||_{x*} over the trailing
// iterations of a solve run with keep_iterates. Purely diagnostic.
struct LinearDiagnosticReport {
  std::vector<double> c_res;
  std::vector<double> contraction;
  double median_c_res = 0;
};

LinearDiagnosticReport local_linear_diagnostic(const GradResult& run,
                                               const SmoothOracle& oracle,
                                               const Vec& x_star,
                                               int tail = 20);

}  // namespace scomp
