#pragma once

#include "scomp/subsolver/fista.hpp"

namespace scomp {

// Elementwise clamp of U to [-1, 1]; the projection onto ||vec(U)||_inf <= 1.
Mat project_linf_ball(const Mat& U);

// Dual subproblem of the graph-selection proximal-Newton step:
//   U* = argmin_{||vec(U)||_inf <= 1} 1/2 tr((Theta U)^2) + tr(Qtilde U),
// with Qtilde = rho^-1 (Theta SigmaHat Theta - 2 Theta). Solved by projected
// FISTA with step 1/L, L = gamma_max(Theta)^2 from the power method.
// `warm`, when sized, seeds U. Counters: matmul counts the Theta U Theta
// products; no factorization happens here.
struct DualGraphResult {
  Mat U;                   // feasible, symmetric
  int inner_iters = 0;
  double residual = 0.0;   // projected-gradient fixed-point residual
  double lipschitz = 0.0;  // gamma_max(Theta)^2 estimate used
};

DualGraphResult solve_dual_graph(const Mat& Theta, const Mat& Sigma_hat,
                                 double rho, const SubsolverControls& ctrl,
                                 const Mat& warm = Mat(),
                                 Counters* ct = nullptr);

// Primal direction recovered from the dual solution:
//   Delta = -((Theta SigmaHat - I) Theta + rho Theta U* Theta),
// symmetrized against drift.
Mat recover_primal_direction(const Mat& Theta, const Mat& Sigma_hat,
                             double rho, const Mat& U_star,
                             Counters* ct = nullptr);

// lambda = sqrt(p - 2 tr(W) + tr(W^2)) with W = Theta (SigmaHat + rho U*).
// Slightly negative squares (inexact duals near convergence) are clamped to
// zero; `clamped` reports that.
double dual_graph_decrement(const Mat& Theta, const Mat& Sigma_hat, double rho,
                            const Mat& U_star, bool* clamped = nullptr,
                            Counters* ct = nullptr);

}  // namespace scomp
