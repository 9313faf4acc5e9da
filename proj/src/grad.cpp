#include "scomp/solver/grad.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "scomp/omega.hpp"

namespace scomp {

void GradConfig::validate() const {
  if (!(eps > 0)) throw DomainError("GradConfig: eps must be > 0");
  if (!(L_min > 0)) throw DomainError("GradConfig: L_min must be > 0");
  if (max_iter < 1) throw DomainError("GradConfig: max_iter must be >= 1");
  if (max_halvings < 0) throw DomainError("GradConfig: max_halvings < 0");
}

double grad_step_size(double lambda, double beta) {
  if (!(lambda > 0)) {
    throw Error("grad_step_size: lambda must be positive; termination should "
                "have fired on a zero direction");
  }
  const double b2 = beta * beta;
  return std::min(b2 / (lambda * (lambda + b2)), 1.0);
}

ChooseLkResult choose_Lk(const ProblemInstance& prob, const OraclePoint& pt,
                         const Vec& x_k, double L_init, const GradConfig& cfg,
                         ProxWorkspace* ws, Counters* ct) {
  if (!(L_init > 0)) throw DomainError("choose_Lk: L_init must be > 0");
  const Vec& grad = pt.gradient();
  double L = std::clamp(L_init, cfg.L_min, cfg.L_max);

  ChooseLkResult out;
  Vec d_ones(x_k.size());
  for (int h = 0;; ++h) {
    d_ones.setConstant(L);
    Vec s = prob.reg->prox_diag(L * x_k - grad, d_ones, ws, ct);
    Vec d = s - x_k;
    const double dn2 = d.squaredNorm();
    if (dn2 == 0.0) {
      out.L = L;
      out.dir.s = std::move(s);
      out.dir.d = std::move(d);
      out.dir.lambda = 0.0;
      out.dir.beta = 0.0;
      out.halvings = h;
      return out;
    }
    const double lambda = prob.decrement ? prob.decrement(pt, d)
                                         : local_norm(pt, d);
    const double beta_sq = L * dn2;
    const bool accept =
        lambda >= 1.0 || lambda * lambda / beta_sq + lambda >= 1.0 - 1e-12;
    if (accept) {
      out.L = L;
      out.dir.s = std::move(s);
      out.dir.d = std::move(d);
      out.dir.lambda = lambda;
      out.dir.beta = std::sqrt(beta_sq);
      out.halvings = h;
      return out;
    }
    if (h >= cfg.max_halvings || L <= cfg.L_min) {
      throw StepConditionFailure("choose_Lk: halving budget exhausted", lambda,
                                 std::sqrt(beta_sq), L);
    }
    L = std::max(0.5 * L, cfg.L_min);
  }
}

Vec greedy_update(const ProblemInstance& prob, const Vec& x_k, const Vec& s_k,
                  double alpha, double* F_next, Counters* ct) {
  if (!(alpha > 0) || alpha > 1.0) {
    throw DomainError("greedy_update: alpha must lie in (0, 1]");
  }
  Vec x_hat = x_k + alpha * (s_k - x_k);
  const double F_s = prob.objective(s_k, ct);
  const double F_hat = prob.objective(x_hat, ct);
  if (std::isfinite(F_s) && F_s < F_hat) {
    if (F_next) *F_next = F_s;
    return s_k;
  }
  if (F_next) *F_next = F_hat;
  return x_hat;
}

GradResult solve_grad(const ProblemInstance& prob, const GradConfig& cfg) {
  cfg.validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Counters ct;
  auto ws = prob.reg->make_workspace();

  Vec x = prob.x0;
  auto pt = prob.oracle->at(x, &ct);
  if (!pt->in_domain()) throw DomainError("solve_grad: x0 outside dom f");
  if (!std::isfinite(prob.reg->eval(x))) {
    throw DomainError("solve_grad: x0 outside dom g");
  }

  GradResult res;
  SolverTrace& tr = res.trace;
  tr.method = cfg.greedy ? "grad/greedy" : "grad";
  tr.eps = cfg.eps;
  tr.sigma_gate = nan;
  tr.sigma_bar = nan;
  tr.exit_code = 2;
  tr.exit_reason = "max-iter";

  auto objective_at_pt = [&](const OraclePoint& p, const Vec& xx) {
    ++ct.feval;
    const double fx = p.value();
    return std::isfinite(fx) ? fx + prob.reg->eval(xx) : kInf;
  };
  double F_cur = cfg.record_objective || cfg.greedy
                     ? objective_at_pt(*pt, x)
                     : nan;
  double L_prev = 0;
  Vec x_prev, g_prev;
  Vec xbar_acc = Vec::Zero(x.size());
  double S = 0;

  const auto t0 = std::chrono::steady_clock::now();
  auto wall_ms = [&]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vec grad = pt->gradient();

    double L_init;
    if (k == 0) {
      L_init = cfg.L0 > 0
                   ? cfg.L0
                   : std::max(power_method_max_eig(
                                  [&](const Vec& v, Vec& o) {
                                    pt->hess_vec(v, o);
                                  },
                                  x.size(), cfg.power_iters),
                              cfg.L_min);
    } else if (cfg.bb_init) {
      const Vec dx = x - x_prev;
      const Vec dg = grad - g_prev;
      const double bb = dg.dot(dx) / dx.squaredNorm();
      // Negative BB curvature: fall back to the previous accepted L.
      L_init = std::isfinite(bb) && bb > 0
                   ? std::clamp(bb, cfg.L_min, cfg.L_max)
                   : L_prev;
    } else {
      L_init = L_prev;
    }

    ChooseLkResult lk = choose_Lk(prob, *pt, x, L_init, cfg, ws.get(), &ct);
    const double lambda = lk.dir.lambda;
    const double beta = lk.dir.beta;
    const double dnorm = lk.dir.d.norm();

    TraceRecord row;
    row.k = k;
    row.F = F_cur;
    row.lambda = lambda;
    row.beta = beta;
    row.L = lk.L;

    double ek = dnorm;
    if (cfg.term == GradTermination::RelDirNorm) {
      ek = dnorm / std::max(1.0, x.norm());
    } else if (cfg.term == GradTermination::DirNormOverSqrtL) {
      ek = dnorm / std::sqrt(lk.L);
    }

    if (ek <= cfg.eps) {
      row.alpha = nan;
      row.n_chol = ct.chol;
      row.n_matmul = ct.matmul;
      row.n_prox = ct.prox;
      row.n_feval = ct.feval;
      row.wall_ms = wall_ms();
      tr.records.push_back(row);
      tr.exit_code = 0;
      tr.exit_reason = "converged";
      tr.final_decrement = ek;
      break;
    }

    const double alpha = grad_step_size(lambda, beta);
    // Dikin-ball feasibility of the step construction.
    if (!(alpha * lambda < 1.0)) {
      throw Error("solve_grad: alpha*lambda >= 1; step construction violated "
                  "(bug)");
    }

    S += alpha;
    xbar_acc += alpha * x;
    if (cfg.keep_iterates) {
      res.iterates.push_back(x);
      res.directions.push_back(lk.dir.d);
      res.alphas.push_back(alpha);
      res.Ls.push_back(lk.L);
    }

    x_prev = x;
    g_prev = grad;
    const double F_prev = F_cur;
    if (cfg.greedy) {
      x = greedy_update(prob, x, lk.dir.s, alpha, &F_cur, &ct);
    } else {
      x += alpha * lk.dir.d;
    }

    pt = prob.oracle->at(x, &ct);
    if (!pt->in_domain()) {
      throw Error("solve_grad: iterate left dom f; analytic step guarantee "
                  "violated (bug)");
    }
    if (!cfg.greedy) {
      F_cur = cfg.record_objective ? objective_at_pt(*pt, x) : nan;
    }

    // Lemma-4 guaranteed decrease omega(beta^2/lambda).
    if (std::isfinite(F_prev) && std::isfinite(F_cur) &&
        F_cur > F_prev - omega(beta * beta / lambda) +
                    1e-8 * (1.0 + std::fabs(F_prev))) {
      tr.anomaly_descent = true;
    }

    row.alpha = alpha;
    row.n_chol = ct.chol;
    row.n_matmul = ct.matmul;
    row.n_prox = ct.prox;
    row.n_feval = ct.feval;
    row.wall_ms = wall_ms();
    tr.records.push_back(row);
    tr.final_decrement = ek;
    L_prev = lk.L;
  }

  res.x = x;
  res.S = S;
  res.ergodic_x = S > 0 ? Vec((xbar_acc / S).eval()) : x;
  return res;
}

LinearDiagnosticReport local_linear_diagnostic(const GradResult& run,
                                               const SmoothOracle& oracle,
                                               const Vec& x_star, int tail) {
  LinearDiagnosticReport rep;
  auto pt = oracle.at(x_star);
  if (!pt->in_domain()) {
    throw DomainError("local_linear_diagnostic: x_star outside dom f");
  }
  const int n = static_cast<int>(run.iterates.size());
  const int start = std::max(0, n - tail);
  for (int k = start; k < n; ++k) {
    const Vec& d = run.directions[static_cast<size_t>(k)];
    const double dn = local_norm(*pt, d);
    if (dn > 0) {
      const Vec v = run.Ls[static_cast<size_t>(k)] * d - pt->hess_vec(d);
      rep.c_res.push_back(dual_local_norm(*pt, v) / dn);
    }
    if (k + 1 < n) {
      const double rk = local_norm(*pt, run.iterates[static_cast<size_t>(k)] -
                                            x_star);
      const double rk1 = local_norm(
          *pt, run.iterates[static_cast<size_t>(k + 1)] - x_star);
      if (rk > 0) rep.contraction.push_back(rk1 / rk);
    }
  }
  if (!rep.c_res.empty()) {
    std::vector<double> sorted = rep.c_res;
    std::sort(sorted.begin(), sorted.end());
    const size_t m = sorted.size();
    rep.median_c_res = m % 2 == 1
                           ? sorted[m / 2]
                           : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  }
  return rep;
}

}  // namespace scomp
