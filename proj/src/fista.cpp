#include "scomp/subsolver/fista.hpp"

#include <cmath>

#include "scomp/kernels.hpp"

namespace scomp {

namespace {

// One prox step from point y with precomputed H(y - x_k):
//   out = P^g_{L I}(L y - (H(y - x_k) + grad)).
void prox_step(const Regularizer& reg, const Vec& y, const Vec& hy,
               const Vec& grad, double L, const Vec& Lones, Vec& out,
               ProxWorkspace* ws, Counters* ct) {
  Vec u = L * y - hy - grad;
  reg.prox_diag(u, Lones, out, ws, ct);
}

}  // namespace

SubproblemResult solve_primal_fista(const MetricOperator& H, const Vec& grad,
                                    const Vec& x_k, const Regularizer& reg,
                                    const SubsolverControls& ctrl,
                                    const Vec& warm, ProxWorkspace* ws,
                                    Counters* ct) {
  const Index n = x_k.size();
  if (!(ctrl.tol > 0)) throw DomainError("solve_primal_fista: tol must be > 0");
  if (!(H.largest_eig_estimate > 0)) {
    throw MetricError("solve_primal_fista: nonpositive Lipschitz estimate");
  }
  double L = H.largest_eig_estimate * ctrl.lipschitz_inflation;
  Vec Lones = Vec::Constant(n, L);

  // Subproblem pieces around x_k; psi(x) = 1/2 d'Hd + grad'd + g(x).
  auto psi = [&](const Vec& x, const Vec& hx) {
    const Vec d = x - x_k;
    return 0.5 * d.dot(hx) + grad.dot(d) + reg.eval(x);
  };
  auto apply_h = [&](const Vec& x, Vec& out) {
    Vec d = x - x_k;
    H.apply(d, out);
    const double q = d.dot(out);
    if (q < -1e-12 * d.squaredNorm()) {
      throw MetricError("solve_primal_fista: indefinite metric detected");
    }
  };

  Vec x_cur = warm.size() == n ? warm : x_k;
  Vec hx_cur(n);
  apply_h(x_cur, hx_cur);
  double psi_cur = psi(x_cur, hx_cur);

  Vec x_prev = x_cur, hx_prev = hx_cur;
  Vec y(n), hy(n), x_new(n), hx_new(n), fp(n);
  double t = 1.0;
  bool lipschitz_bumped = false;
  double residual = kInf;

  auto fixed_point_residual = [&](const Vec& x, const Vec& hx) {
    prox_step(reg, x, hx, grad, L, Lones, fp, ws, ct);
    return std::sqrt(kernels::active().sum_sq_diff(n, x.data(), fp.data())) /
           std::max(1.0, x.norm());
  };

  int iters = 0;
  for (; iters < ctrl.max_iter; ++iters) {
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double m = (t - 1.0) / t_new;
    y = x_cur + m * (x_cur - x_prev);
    hy = (1.0 + m) * hx_cur - m * hx_prev;

    prox_step(reg, y, hy, grad, L, Lones, x_new, ws, ct);
    apply_h(x_new, hx_new);
    double psi_new = psi(x_new, hx_new);

    if (psi_new > psi_cur) {
      // Function-value adaptive restart: drop momentum, step from x_cur.
      t = 1.0;
      prox_step(reg, x_cur, hx_cur, grad, L, Lones, x_new, ws, ct);
      apply_h(x_new, hx_new);
      psi_new = psi(x_new, hx_new);
      if (psi_new > psi_cur && !lipschitz_bumped) {
        // The plain step still ascends: Lipschitz estimate was low.
        L *= 2.0;
        Lones.setConstant(L);
        lipschitz_bumped = true;
        prox_step(reg, x_cur, hx_cur, grad, L, Lones, x_new, ws, ct);
        apply_h(x_new, hx_new);
        psi_new = psi(x_new, hx_new);
      }
    } else {
      t = t_new;
    }

    const double change =
        std::sqrt(kernels::active().sum_sq_diff(n, x_new.data(),
                                                x_cur.data())) /
        std::max(1.0, x_new.norm());
    x_prev.swap(x_cur);
    hx_prev.swap(hx_cur);
    x_cur.swap(x_new);
    hx_cur.swap(hx_new);
    psi_cur = psi_new;

    if (change <= 0.5 * ctrl.tol || (iters + 1) % 16 == 0) {
      residual = fixed_point_residual(x_cur, hx_cur);
      if (residual <= ctrl.tol) {
        ++iters;
        break;
      }
    }
  }

  if (!(residual <= ctrl.tol)) {
    residual = fixed_point_residual(x_cur, hx_cur);
    if (residual > ctrl.tol) {
      throw SubsolverFailure("solve_primal_fista: no convergence in " +
                                 std::to_string(ctrl.max_iter) + " iterations",
                             residual);
    }
  }

  SubproblemResult res;
  res.s = x_cur;
  res.d = x_cur - x_k;
  res.inner_iters = iters;
  res.residual = residual;
  return res;
}

}  // namespace scomp
