#pragma once

#include <cstdint>

#include "scomp/prox/tv.hpp"
#include "scomp/solver/grad.hpp"

namespace scomp {

struct PoissonProblem {
  SpMat A;          // m x n nonnegative sensing/blur operator
  Vec y;            // observed counts
  double rho = 0;   // TV weight (pre-standardization)
  Index height = 0;
  Index width = 0;  // n = height * width
  Vec x0;           // strictly interior start
  TvControls tv{};
};

// Blur-then-sample operator as an explicit sparse matrix (separable box
// blur of the given radius, replicate boundary, rows sum to one).
SpMat make_blur_operator(Index height, Index width, int radius);

// Smooth multi-blob phantom scaled to peak `intensity`.
Vec make_phantom(Index height, Index width, double intensity);

// y ~ Poisson(A x_true); deterministic under seed. Default x0 is the
// positive part of a regularized least-squares fit plus a small floor.
PoissonProblem synth_poisson(Index height, Index width, int blur_radius,
                             double intensity, std::uint64_t seed, double rho,
                             const Vec* image = nullptr);
PoissonProblem make_poisson_problem(SpMat A, Vec y, Index height, Index width,
                                    double rho);

struct PoissonSolveResult {
  Vec x;
  SolverTrace trace;
  double final_fp_residual = 0;  // ||d(x_final)|| / max(1, ||x_final||)
  double M = 0;                  // self-concordance constant of f-tilde
};

// ProxGrad for Poisson intensity reconstruction; greedy = true gives the
// trial-point variant. Termination: ||d|| / sqrt(L) <= eps.
PoissonSolveResult poisson_solve(const PoissonProblem& prob, GradConfig cfg,
                                 bool greedy = false);

}  // namespace scomp
