#pragma once

#include <cstdint>

#include "scomp/solver/newton.hpp"
#include "scomp/solver/grad.hpp"

namespace scomp {

struct GraphProblem {
  Mat sigma_hat;  // symmetric p x p
  double rho = 0;
  Mat theta0;     // SPD start; defaults to diag(1/(sigma_ii + rho))
};

// Validates inputs and fills the default start.
GraphProblem make_graph_problem(Mat sigma_hat, double rho);

// Underlying truth of a synthetic instance, for tests and diagnostics.
struct GmrfData {
  Mat theta_true;
  Mat sigma;      // theta_true^-1
  Mat sigma_hat;  // sample covariance (or sigma exactly when n_samples = 0)
};

// Sparse SPD precision with +-Uniform(0.5,1) off-diagonals at the given
// density and an eigenvalue shift certifying cond <= 1e3; deterministic
// under seed. n_samples = 0 returns the exact covariance.
GmrfData synth_gmrf_data(Index p, double density, Index n_samples,
                         std::uint64_t seed);
GraphProblem synth_gmrf(Index p, double density, Index n_samples,
                        std::uint64_t seed, double rho);

struct DpngsConfig {
  double sigma = 0.2;
  double eps = 1e-6;
  int max_iter = 200;
  StepStrategy strategy = StepStrategy::NoLS;
  SubsolverControls sub{};
  // F rows cost one Cholesky each; strategies that probe record F for free,
  // NoLS leaves the column NaN unless this is set.
  bool record_objective = false;
  int max_backtracks = 30;
  double armijo_c = 1e-4;
  int max_forward_probes = 6;

  void validate() const;
};

struct GraphSolveResult {
  Mat theta;
  SolverTrace trace;
  // Structural loop work vs objective-evaluation work, kept apart so the
  // inversion-free claim is checkable: loop.chol must stay 0 for DPNGS.
  Counters loop;
  Counters eval;
};

// Dual proximal-Newton for graph selection: per-iteration dual subproblem
// over ||vec(U)||_inf <= 1, direction recovery, closed-form decrement, and
// analytic/step-strategy stepping. No factorization in the loop.
GraphSolveResult dpngs_solve(const GraphProblem& prob, const DpngsConfig& cfg);

struct ProxGrad1Config {
  double eps = 1e-6;
  GradTermination term = GradTermination::RelDirNorm;
  int max_iter = 10000;
  double L_min = 1e-12;
  int max_halvings = 40;
  int power_iters = 10;
  bool record_objective = true;
};

// Matrix-shaped proximal gradient for graph selection: one Cholesky per
// iteration, soft-thresholded direction, L_i = 0.5 ||Theta_i^-1||_2^2 as the
// initial metric with condition-(19) halvings.
GraphSolveResult proxgrad_graph_solve(const GraphProblem& prob,
                                      const ProxGrad1Config& cfg);

// Objective F(Theta) = -log det Theta + tr(SigmaHat Theta) + rho ||vec||_1.
double graph_objective(const GraphProblem& prob, const Mat& theta,
                       Counters* ct = nullptr);

}  // namespace scomp
