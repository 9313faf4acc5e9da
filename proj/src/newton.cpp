#include "scomp/solver/newton.hpp"

#include <chrono>
#include <cmath>

#include "scomp/omega.hpp"

namespace scomp {

std::string to_string(StepStrategy s) {
  switch (s) {
    case StepStrategy::NoLS: return "nols";
    case StepStrategy::BtkLS: return "btkls";
    case StepStrategy::EBtkLS: return "e-btkls";
    case StepStrategy::FwLS: return "fwls";
  }
  return "?";
}

StepStrategy parse_strategy(const std::string& name) {
  if (name == "nols") return StepStrategy::NoLS;
  if (name == "btkls") return StepStrategy::BtkLS;
  if (name == "e-btkls" || name == "ebtkls") return StepStrategy::EBtkLS;
  if (name == "fwls") return StepStrategy::FwLS;
  throw DomainError("unknown step strategy: " + name);
}

void NewtonConfig::validate() const {
  if (!(sigma > 0) || sigma > kSigmaBarFull + 1e-15) {
    throw DomainError("NewtonConfig: sigma must lie in (0, (5-sqrt(17))/4]");
  }
  if (!(eps > 0) || eps >= sigma) {
    throw DomainError("NewtonConfig: eps must lie in (0, sigma)");
  }
  if (max_iter < 1) throw DomainError("NewtonConfig: max_iter must be >= 1");
}

double ProblemInstance::objective(const Vec& x, Counters* ct) const {
  const double fx = oracle->value(x, ct);
  if (ct) ++ct->feval;
  if (!std::isfinite(fx)) return kInf;
  const double gx = reg->eval(x);
  return fx + gx;
}

double analytic_damped_step(double lambda) {
  if (lambda < 0) throw DomainError("analytic_damped_step: lambda < 0");
  return 1.0 / (1.0 + lambda);
}

namespace {

SearchDirectionResult direction_at(const ProblemInstance& prob,
                                   const OraclePoint& pt, const Vec& x_k,
                                   const SubsolverControls& sub,
                                   int power_iters, const Vec& warm,
                                   ProxWorkspace* ws, Counters* ct) {
  MetricOperator H = hessian_metric(pt, x_k.size(), 0.0, power_iters);
  SubproblemResult sp =
      solve_primal_fista(H, pt.gradient(), x_k, *prob.reg, sub, warm, ws, ct);
  SearchDirectionResult out;
  out.s = std::move(sp.s);
  out.d = std::move(sp.d);
  out.lambda = prob.decrement ? prob.decrement(pt, out.d)
                              : local_norm(pt, out.d);
  out.beta = out.lambda;  // H_k = Hessian: the two norms coincide
  out.inner_iters = sp.inner_iters;
  out.residual = sp.residual;
  return out;
}

}  // namespace

SearchDirectionResult newton_direction(const ProblemInstance& prob,
                                       const Vec& x_k,
                                       const SubsolverControls& sub,
                                       int power_iters, Counters* ct) {
  auto pt = prob.oracle->at(x_k, ct);
  if (!pt->in_domain()) throw DomainError("newton_direction: x_k not in dom f");
  auto ws = prob.reg->make_workspace();
  return direction_at(prob, *pt, x_k, sub, power_iters, Vec(), ws.get(), ct);
}

StepChoice select_step(StepStrategy strategy, double lambda, double sigma,
                       double F_cur, double slope,
                       const std::function<double(double)>& probe,
                       const NewtonConfig& cfg) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double alpha_star = analytic_damped_step(lambda);
  StepChoice out;
  out.F_new = nan;

  const bool full_region = lambda <= sigma;
  if (strategy == StepStrategy::NoLS) {
    out.alpha = full_region ? 1.0 : alpha_star;
    return out;
  }
  if (full_region && strategy != StepStrategy::BtkLS) {
    // Side information from the analytic step: inside the quadratic region
    // the full step needs no function evaluation.
    out.alpha = 1.0;
    return out;
  }

  if (strategy == StepStrategy::BtkLS || strategy == StepStrategy::EBtkLS) {
    double alpha = 1.0;
    const double lower = strategy == StepStrategy::EBtkLS ? alpha_star : 0.0;
    for (int i = 0; i < cfg.max_backtracks && alpha > lower; ++i) {
      const double F_try = probe(alpha);
      ++out.evals_used;
      if (F_try <= F_cur + cfg.armijo_c * alpha * slope) {
        out.alpha = alpha;
        out.F_new = F_try;
        return out;
      }
      alpha *= 0.5;
    }
    // No probed step achieved the decrease; the analytic step is guaranteed.
    out.alpha = alpha_star;
    out.F_new = probe(alpha_star);
    ++out.evals_used;
    out.degraded = strategy == StepStrategy::BtkLS;
    return out;
  }

  // FwLS: start at alpha*, grow by doubling toward 1, keep the best
  // strictly improving feasible probe, stop on the first failure.
  double best_alpha = alpha_star;
  double best_F = probe(alpha_star);
  ++out.evals_used;
  if (!(best_F < F_cur)) {
    out.alpha = alpha_star;
    out.F_new = best_F;
    out.degraded = true;
    return out;
  }
  double alpha = std::min(2.0 * alpha_star, 1.0);
  for (int i = 1; i < cfg.max_forward_probes && alpha > best_alpha; ++i) {
    const double F_try = probe(alpha);
    ++out.evals_used;
    if (!(F_try < best_F)) break;  // infeasible (+inf) or no improvement
    best_alpha = alpha;
    best_F = F_try;
    if (alpha >= 1.0) break;
    alpha = std::min(2.0 * alpha, 1.0);
  }
  out.alpha = best_alpha;
  out.F_new = best_F;
  return out;
}

NewtonResult solve_newton(const ProblemInstance& prob,
                          const NewtonConfig& cfg) {
  cfg.validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Counters ct;
  auto ws = prob.reg->make_workspace();

  Vec x = prob.x0;
  auto pt = prob.oracle->at(x, &ct);
  if (!pt->in_domain()) throw DomainError("solve_newton: x0 outside dom f");
  if (!std::isfinite(prob.reg->eval(x))) {
    throw DomainError("solve_newton: x0 outside dom g");
  }

  NewtonResult res;
  SolverTrace& tr = res.trace;
  tr.method = "newton/" + to_string(cfg.strategy);
  tr.eps = cfg.eps;
  tr.sigma_gate = cfg.sigma;
  tr.sigma_bar = kSigmaBarDamped;
  tr.exit_code = 2;
  tr.exit_reason = "max-iter";

  std::optional<double> F_cur;
  // The live point handle already carries the factorization; objective rows
  // reuse it instead of paying a second one.
  auto ensure_F = [&]() {
    if (!F_cur) {
      ++ct.feval;
      const double fx = pt->value();
      F_cur = std::isfinite(fx) ? fx + prob.reg->eval(x) : kInf;
    }
    return *F_cur;
  };
  if (cfg.record_objective) ensure_F();

  Vec warm;
  bool seen_full = false;
  bool prev_full_step = false;
  double lambda_prev = nan;

  const auto t0 = std::chrono::steady_clock::now();
  auto wall_ms = [&]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  for (int k = 0; k < cfg.max_iter; ++k) {
    SearchDirectionResult dir = direction_at(prob, *pt, x, cfg.sub,
                                             cfg.power_iters, warm, ws.get(),
                                             &ct);
    const double lambda = dir.lambda;
    warm = dir.s;

    TraceRecord row;
    row.k = k;
    row.lambda = lambda;
    row.beta = dir.beta;
    row.L = nan;
    row.F = F_cur ? *F_cur : nan;

    // Theorem 4c: after entering the quadratic region the decrement must
    // not grow; Theorem 5's constant gates the full-step contraction.
    if (prev_full_step && std::isfinite(lambda_prev)) {
      if (lambda_prev <= kSigmaBarFull && lambda > lambda_prev + 1e-12) {
        tr.anomaly_contraction = true;
      }
      if (cfg.sigma == 0.2 && lambda_prev <= cfg.sigma &&
          lambda > 3.57 * lambda_prev * lambda_prev + 1e-7) {
        tr.anomaly_contraction = true;
      }
    }

    if (lambda <= cfg.eps) {
      row.alpha = nan;
      row.n_chol = ct.chol;
      row.n_matmul = ct.matmul;
      row.n_prox = ct.prox;
      row.n_feval = ct.feval;
      row.wall_ms = wall_ms();
      tr.records.push_back(row);
      tr.exit_code = 0;
      tr.exit_reason = "converged";
      tr.final_decrement = lambda;
      res.x = x;
      return res;
    }

    const bool full_region = lambda <= cfg.sigma;
    if (full_region) {
      seen_full = true;
    } else if (seen_full) {
      tr.anomaly_phase_reentry = true;
    }

    const bool probing =
        cfg.strategy == StepStrategy::BtkLS ||
        (!full_region && cfg.strategy != StepStrategy::NoLS);
    if (probing) ensure_F();
    row.F = F_cur ? *F_cur : nan;

    double slope = 0.0;
    if (probing) {
      slope = pt->gradient().dot(dir.d) + prob.reg->eval(dir.s) -
              prob.reg->eval(x);
    }
    auto probe = [&](double a) { return prob.objective(x + a * dir.d, &ct); };
    const StepChoice sc = select_step(cfg.strategy, lambda, cfg.sigma,
                                      F_cur ? *F_cur : kInf, slope, probe,
                                      cfg);

    x += sc.alpha * dir.d;
    pt = prob.oracle->at(x, &ct);
    if (!pt->in_domain()) {
      throw Error("solve_newton: iterate left dom f; step-size guarantee "
                  "violated (bug)");
    }

    const double F_prev = F_cur ? *F_cur : nan;
    if (std::isfinite(sc.F_new)) {
      F_cur = sc.F_new;
    } else if (cfg.record_objective) {
      F_cur.reset();
      ensure_F();
    } else {
      F_cur.reset();
    }

    // Theorem 3 descent in the damped phase, when F is being tracked.
    if (!full_region && std::isfinite(F_prev) && F_cur &&
        *F_cur > F_prev - omega(lambda) + 1e-8 * (1.0 + std::fabs(F_prev))) {
      tr.anomaly_descent = true;
    }

    row.alpha = sc.alpha;
    row.n_chol = ct.chol;
    row.n_matmul = ct.matmul;
    row.n_prox = ct.prox;
    row.n_feval = ct.feval;
    row.wall_ms = wall_ms();
    tr.records.push_back(row);

    prev_full_step = full_region && sc.alpha == 1.0;
    lambda_prev = lambda;
    tr.final_decrement = lambda;
  }

  res.x = x;
  return res;
}

Mat bfgs_update(const Mat& H, const Vec& z, const Vec& y) {
  if (H.rows() != H.cols() || H.rows() != z.size() || z.size() != y.size()) {
    throw DomainError("bfgs_update: dimension mismatch");
  }
  const double yz = y.dot(z);
  if (!(yz > 1e-12 * y.norm() * z.norm())) {
    throw CurvatureError("bfgs_update: y'z is not safely positive");
  }
  const Vec Hz = H.selfadjointView<Eigen::Lower>() * z;
  const double zHz = z.dot(Hz);
  if (!(zHz > 0)) {
    throw CurvatureError("bfgs_update: H is not positive along z");
  }
  Mat out = H + (y * y.transpose()) / yz - (Hz * Hz.transpose()) / zHz;
  return 0.5 * (out + out.transpose());
}

}  // namespace scomp
