#include "scomp/apps/graph.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>

#include "scomp/kernels.hpp"
#include "scomp/omega.hpp"
#include "scomp/oracles/logdet.hpp"
#include "scomp/rng.hpp"
#include "scomp/subsolver/dual_graph.hpp"

namespace scomp {

GraphProblem make_graph_problem(Mat sigma_hat, double rho) {
  if (sigma_hat.rows() != sigma_hat.cols()) {
    throw DomainError("GraphProblem: sigma_hat must be square");
  }
  const double asym =
      (sigma_hat - sigma_hat.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * std::max(1.0, sigma_hat.cwiseAbs().maxCoeff())) {
    throw DomainError("GraphProblem: sigma_hat is not symmetric");
  }
  if (!(rho > 0)) throw DomainError("GraphProblem: rho must be > 0");
  GraphProblem prob;
  prob.sigma_hat = 0.5 * (sigma_hat + sigma_hat.transpose());
  prob.rho = rho;
  const Index p = prob.sigma_hat.rows();
  prob.theta0 = Mat::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    prob.theta0(i, i) = 1.0 / (prob.sigma_hat(i, i) + rho);
  }
  return prob;
}

GmrfData synth_gmrf_data(Index p, double density, Index n_samples,
                         std::uint64_t seed) {
  if (p < 2) throw DomainError("synth_gmrf: p must be >= 2");
  if (!(density > 0) || density >= 1) {
    throw DomainError("synth_gmrf: density must lie in (0,1)");
  }
  Rng rng(seed);
  GmrfData data;
  Mat A = Mat::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      if (rng.uniform() < density) {
        const double mag = rng.uniform(0.5, 1.0);
        A(i, j) = A(j, i) = rng.uniform() < 0.5 ? mag : -mag;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(A);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  // Shift so the spectrum is positive with condition number <= 1e3.
  const double s = std::max((hi - lo) / 999.0, 0.1);
  data.theta_true = A + (s - lo) * Mat::Identity(p, p);
  data.sigma = data.theta_true.llt().solve(Mat::Identity(p, p));
  data.sigma = 0.5 * (data.sigma + data.sigma.transpose()).eval();

  if (n_samples == 0) {
    data.sigma_hat = data.sigma;
  } else {
    const Mat L = data.sigma.llt().matrixL();
    Mat acc = Mat::Zero(p, p);
    for (Index s_i = 0; s_i < n_samples; ++s_i) {
      const Vec z = L * rng.normal_vec(p);
      acc.selfadjointView<Eigen::Lower>().rankUpdate(z, 1.0);
    }
    data.sigma_hat = Mat(acc.selfadjointView<Eigen::Lower>()) /
                     static_cast<double>(n_samples);
  }
  return data;
}

GraphProblem synth_gmrf(Index p, double density, Index n_samples,
                        std::uint64_t seed, double rho) {
  return make_graph_problem(synth_gmrf_data(p, density, n_samples, seed)
                                .sigma_hat,
                            rho);
}

double graph_objective(const GraphProblem& prob, const Mat& theta,
                       Counters* ct) {
  LogDetOracle oracle(prob.sigma_hat);
  auto pt = oracle.point(theta, ct);
  if (ct) ++ct->feval;
  const double f = pt.value();
  if (!std::isfinite(f)) return kInf;
  return f + prob.rho * theta.cwiseAbs().sum();
}

void DpngsConfig::validate() const {
  if (!(sigma > 0) || sigma > kSigmaBarFull + 1e-15) {
    throw DomainError("DpngsConfig: sigma must lie in (0, (5-sqrt(17))/4]");
  }
  if (!(eps > 0) || eps >= sigma) {
    throw DomainError("DpngsConfig: eps must lie in (0, sigma)");
  }
  if (max_iter < 1) throw DomainError("DpngsConfig: max_iter must be >= 1");
}

GraphSolveResult dpngs_solve(const GraphProblem& prob,
                             const DpngsConfig& cfg) {
  cfg.validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Index p = prob.sigma_hat.rows();
  if (prob.theta0.rows() != p || prob.theta0.cols() != p) {
    throw DomainError("dpngs_solve: theta0 dimension mismatch");
  }

  GraphSolveResult res;
  SolverTrace& tr = res.trace;
  tr.method = "dpngs/" + to_string(cfg.strategy);
  tr.eps = cfg.eps;
  tr.sigma_gate = cfg.sigma;
  tr.sigma_bar = kSigmaBarDamped;
  tr.exit_code = 2;
  tr.exit_reason = "max-iter";

  LogDetOracle oracle(prob.sigma_hat);
  {
    Counters probe_ct;
    if (!oracle.point(prob.theta0, &probe_ct).in_domain()) {
      throw DomainError("dpngs_solve: theta0 is not positive definite");
    }
  }

  Mat theta = prob.theta0;
  Mat warm_u;
  std::optional<double> F_cur;
  auto objective = [&](const Mat& th) {
    auto pt = oracle.point(th, &res.eval);
    ++res.eval.feval;
    const double f = pt.value();
    if (!std::isfinite(f)) return kInf;
    return f + prob.rho * th.cwiseAbs().sum();
  };
  auto ensure_F = [&]() {
    if (!F_cur) F_cur = objective(theta);
    return *F_cur;
  };
  if (cfg.record_objective) ensure_F();

  NewtonConfig step_cfg;  // shared select_step knobs
  step_cfg.max_backtracks = cfg.max_backtracks;
  step_cfg.armijo_c = cfg.armijo_c;
  step_cfg.max_forward_probes = cfg.max_forward_probes;

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
    DualGraphResult dual = solve_dual_graph(theta, prob.sigma_hat, prob.rho,
                                            cfg.sub, warm_u, &res.loop);
    warm_u = dual.U;
    bool clamped = false;
    const double lambda = dual_graph_decrement(theta, prob.sigma_hat,
                                               prob.rho, dual.U, &clamped,
                                               &res.loop);
    if (clamped) tr.lambda_sq_clamped = true;

    TraceRecord row;
    row.k = k;
    row.F = F_cur ? *F_cur : nan;
    row.lambda = lambda;
    row.beta = lambda;
    row.L = dual.lipschitz;

    // Eq. (29) cancels three O(p) traces; below ~sqrt(p * machine eps) the
    // decrement is noise, so the contraction checks stop there.
    const double lambda_floor =
        64.0 * std::sqrt(static_cast<double>(p) *
                         std::numeric_limits<double>::epsilon());
    if (prev_full_step && std::isfinite(lambda_prev) &&
        lambda_prev >= lambda_floor && lambda >= lambda_floor) {
      if (lambda_prev <= kSigmaBarFull && lambda > lambda_prev + 1e-12) {
        tr.anomaly_contraction = true;
      }
      if (cfg.sigma == 0.2 && lambda_prev <= cfg.sigma &&
          lambda > 3.57 * lambda_prev * lambda_prev + 1e-7) {
        tr.anomaly_contraction = true;
      }
    }

    auto finish_row = [&](double alpha) {
      row.alpha = alpha;
      row.n_chol = res.loop.chol + res.eval.chol;
      row.n_matmul = res.loop.matmul + res.eval.matmul;
      row.n_prox = res.loop.prox + res.eval.prox;
      row.n_feval = res.loop.feval + res.eval.feval;
      row.wall_ms = wall_ms();
      tr.records.push_back(row);
    };

    if (lambda <= cfg.eps) {
      finish_row(nan);
      tr.exit_code = 0;
      tr.exit_reason = "converged";
      tr.final_decrement = lambda;
      break;
    }

    const Mat delta = recover_primal_direction(theta, prob.sigma_hat,
                                               prob.rho, dual.U, &res.loop);

    const bool full_region = lambda <= cfg.sigma;
    if (full_region) {
      seen_full = true;
    } else if (seen_full) {
      tr.anomaly_phase_reentry = true;
    }

    const bool probing =
        cfg.strategy == StepStrategy::BtkLS ||
        (!full_region && cfg.strategy != StepStrategy::NoLS);
    double slope = 0.0;
    if (probing) {
      ensure_F();
      row.F = *F_cur;
      // grad'Delta = tr(SigmaHat Delta) - tr(Theta^-1 Delta); the second
      // trace is p - tr(W) with W = Theta (SigmaHat + rho U*), so the slope
      // needs no inverse.
      Mat W = theta * (prob.sigma_hat + prob.rho * dual.U);
      ++res.loop.matmul;
      const double grad_dot =
          prob.sigma_hat.cwiseProduct(delta).sum() -
          (static_cast<double>(p) - W.trace());
      slope = grad_dot + prob.rho * ((theta + delta).cwiseAbs().sum() -
                                     theta.cwiseAbs().sum());
    }

    auto probe = [&](double a) { return objective(theta + a * delta); };
    const StepChoice sc = select_step(cfg.strategy, lambda, cfg.sigma,
                                      F_cur ? *F_cur : kInf, slope, probe,
                                      step_cfg);

    theta += sc.alpha * delta;

    const double F_prev = F_cur ? *F_cur : nan;
    if (std::isfinite(sc.F_new)) {
      F_cur = sc.F_new;
    } else if (cfg.record_objective) {
      F_cur.reset();
      ensure_F();
    } else {
      F_cur.reset();
    }
    if (!full_region && std::isfinite(F_prev) && F_cur &&
        *F_cur > F_prev - omega(lambda) + 1e-8 * (1.0 + std::fabs(F_prev))) {
      tr.anomaly_descent = true;
    }

    finish_row(sc.alpha);
    prev_full_step = full_region && sc.alpha == 1.0;
    lambda_prev = lambda;
    tr.final_decrement = lambda;
  }

  if (res.loop.chol != 0) {
    throw Error("dpngs_solve: factorization leaked into the loop (bug)");
  }
  res.theta = theta;
  return res;
}

GraphSolveResult proxgrad_graph_solve(const GraphProblem& prob,
                                      const ProxGrad1Config& cfg) {
  if (!(cfg.eps > 0)) throw DomainError("ProxGrad1Config: eps must be > 0");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Index p = prob.sigma_hat.rows();
  if (prob.theta0.rows() != p || prob.theta0.cols() != p) {
    throw DomainError("proxgrad_graph_solve: theta0 dimension mismatch");
  }

  GraphSolveResult res;
  SolverTrace& tr = res.trace;
  tr.method = "proxgrad1";
  tr.eps = cfg.eps;
  tr.sigma_gate = nan;
  tr.sigma_bar = nan;
  tr.exit_code = 2;
  tr.exit_reason = "max-iter";

  LogDetOracle oracle(prob.sigma_hat);
  Mat theta = prob.theta0;
  const auto& K = kernels::active();

  const auto t0 = std::chrono::steady_clock::now();
  auto wall_ms = [&]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  for (int k = 0; k < cfg.max_iter; ++k) {
    auto pt = oracle.point(theta, &res.loop);  // the per-iteration Cholesky
    if (!pt.in_domain()) {
      throw Error("proxgrad_graph_solve: iterate lost positive definiteness "
                  "(bug)");
    }
    const Mat& inv = pt.theta_inv();
    const Mat grad = prob.sigma_hat - inv;
    const double F =
        cfg.record_objective
            ? -pt.logdet() + prob.sigma_hat.cwiseProduct(theta).sum() +
                  prob.rho * theta.cwiseAbs().sum()
            : nan;

    double L = 0.5 * std::pow(power_method_max_eig(
                                  [&](const Vec& v, Vec& o) {
                                    o.noalias() = inv * v;
                                  },
                                  p, cfg.power_iters),
                              2.0);
    L = std::max(L, cfg.L_min);

    Mat delta(p, p);
    double lambda = 0, beta_sq = 0;
    int halvings = 0;
    for (;; ++halvings) {
      const double tau = 1.0 / L;
      Mat step = theta - tau * grad;
      K.soft_threshold(step.size(), step.data(), tau * prob.rho,
                       delta.data());
      ++res.loop.prox;
      delta -= theta;
      const double dn2 = delta.squaredNorm();
      if (dn2 == 0.0) {
        lambda = 0;
        beta_sq = 0;
        break;
      }
      Mat G = inv * delta;
      ++res.loop.matmul;
      const double lam_sq = G.cwiseProduct(G.transpose()).sum();
      lambda = std::sqrt(std::max(lam_sq, 0.0));
      beta_sq = L * dn2;
      if (lambda >= 1.0 ||
          lambda * lambda / beta_sq + lambda >= 1.0 - 1e-12) {
        break;
      }
      if (halvings >= cfg.max_halvings || L <= cfg.L_min) {
        throw StepConditionFailure("proxgrad_graph_solve: halving budget "
                                   "exhausted",
                                   lambda, std::sqrt(beta_sq), L);
      }
      L = std::max(0.5 * L, cfg.L_min);
    }

    TraceRecord row;
    row.k = k;
    row.F = F;
    row.lambda = lambda;
    row.beta = std::sqrt(beta_sq);
    row.L = L;

    const double dnorm = delta.norm();
    double ek = dnorm;
    if (cfg.term == GradTermination::RelDirNorm) {
      ek = dnorm / std::max(1.0, theta.norm());
    } else if (cfg.term == GradTermination::DirNormOverSqrtL) {
      ek = dnorm / std::sqrt(L);
    }

    auto finish_row = [&](double alpha) {
      row.alpha = alpha;
      row.n_chol = res.loop.chol + res.eval.chol;
      row.n_matmul = res.loop.matmul + res.eval.matmul;
      row.n_prox = res.loop.prox + res.eval.prox;
      row.n_feval = res.loop.feval + res.eval.feval;
      row.wall_ms = wall_ms();
      tr.records.push_back(row);
    };

    if (ek <= cfg.eps) {
      finish_row(nan);
      tr.exit_code = 0;
      tr.exit_reason = "converged";
      tr.final_decrement = ek;
      break;
    }

    const double alpha = grad_step_size(lambda, std::sqrt(beta_sq));
    theta += alpha * delta;
    finish_row(alpha);
    tr.final_decrement = ek;
  }

  res.theta = theta;
  return res;
}

}  // namespace scomp
