#pragma once

#include <cstdint>

#include "scomp/solver/grad.hpp"

namespace scomp {

struct HetLassoProblem {
  Mat X;          // n x p design
  Vec y;          // n responses
  double rho = 0;
  Vec x0;         // (beta0, sigma0), sigma0 > 0
};

// Defaults beta0 = 0, sigma0 = std(y) (falling back to 1 for constant y).
HetLassoProblem make_hetlasso_problem(Mat X, Vec y, double rho);

// Gaussian design, sparse +-1 signal, additive noise; deterministic.
HetLassoProblem synth_hetlasso(Index n, Index p, Index nnz, double noise,
                               std::uint64_t seed, double rho);

struct HetLassoSolveResult {
  Vec beta;
  double sigma = 0;
  SolverTrace trace;
  GradResult raw;
};

// Proximal gradient on (beta, sigma) with the l1 prox on beta only and the
// closed-form decrement; sigma stays positive by the analytic step.
HetLassoSolveResult hetlasso_solve(const HetLassoProblem& prob,
                                   GradConfig cfg);

}  // namespace scomp
