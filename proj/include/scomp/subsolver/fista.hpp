#pragma once

#include "scomp/prox/regularizer.hpp"
#include "scomp/subsolver/metric.hpp"

namespace scomp {

// Solution of the per-iteration subproblem
//   min_x  f(x^k) + grad'(x - x^k) + 1/2 (x - x^k)' H (x - x^k) + g(x),
// i.e. s = P^g_H(H x^k - grad).
struct SubproblemResult {
  Vec s;                 // subproblem solution
  Vec d;                 // s - x_k
  int inner_iters = 0;
  double residual = 0.0;  // relative prox fixed-point residual at s
};

struct SubsolverControls {
  double tol = 1e-8;
  int max_iter = 1000;
  // Safety factor applied to the power-method Lipschitz estimate.
  double lipschitz_inflation = 1.05;
};

// Accelerated proximal gradient (FISTA) on the subproblem with function-value
// adaptive restart and one halving-restart if the objective increases
// anyway. `warm`, when nonempty, seeds the iteration (previous outer s).
// Throws SubsolverFailure on budget exhaustion, MetricError if the metric
// reveals itself indefinite.
SubproblemResult solve_primal_fista(const MetricOperator& H, const Vec& grad,
                                    const Vec& x_k, const Regularizer& reg,
                                    const SubsolverControls& ctrl,
                                    const Vec& warm = Vec(),
                                    ProxWorkspace* ws = nullptr,
                                    Counters* ct = nullptr);

}  // namespace scomp
