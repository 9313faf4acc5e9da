#include "scomp/subsolver/dual_graph.hpp"

#include <cmath>

#include "scomp/kernels.hpp"

namespace scomp {

namespace {

void clamp_mat(Mat& U) {
  kernels::active().clamp_unit(U.size(), U.data(), U.data());
}

}  // namespace

Mat project_linf_ball(const Mat& U) {
  Mat out(U.rows(), U.cols());
  kernels::active().clamp_unit(U.size(), U.data(), out.data());
  return out;
}

DualGraphResult solve_dual_graph(const Mat& Theta, const Mat& Sigma_hat,
                                 double rho, const SubsolverControls& ctrl,
                                 const Mat& warm, Counters* ct) {
  const Index p = Theta.rows();
  if (Theta.cols() != p || Sigma_hat.rows() != p || Sigma_hat.cols() != p) {
    throw DomainError("solve_dual_graph: dimension mismatch");
  }
  if (!(rho > 0)) throw DomainError("solve_dual_graph: rho must be > 0");
  if (!(ctrl.tol > 0)) throw DomainError("solve_dual_graph: tol must be > 0");

  // Qtilde = rho^-1 (Theta SigmaHat Theta - 2 Theta), kept symmetric.
  Mat T1 = Theta * Sigma_hat;
  Mat Q = (T1 * Theta - 2.0 * Theta) / rho;
  if (ct) ct->matmul += 2;
  Q = 0.5 * (Q + Q.transpose()).eval();

  const double gamma = power_method_max_eig(
      [&](const Vec& v, Vec& out) { out.noalias() = Theta * v; }, p, 10);
  if (!(gamma > 0)) {
    throw MetricError("solve_dual_graph: Theta spectral estimate is zero");
  }
  double L = gamma * gamma * ctrl.lipschitz_inflation;

  auto hmap = [&](const Mat& U, Mat& out) {
    out.noalias() = Theta * U * Theta;
    if (ct) ct->matmul += 2;
  };
  auto phi = [&](const Mat& U, const Mat& hU) {
    return 0.5 * hU.cwiseProduct(U).sum() + Q.cwiseProduct(U).sum();
  };

  Mat U_cur = warm.rows() == p && warm.cols() == p
                  ? Mat(0.5 * (warm + warm.transpose()))
                  : Mat(Mat::Zero(p, p));
  clamp_mat(U_cur);
  Mat hU_cur(p, p);
  hmap(U_cur, hU_cur);
  double phi_cur = phi(U_cur, hU_cur);

  Mat U_prev = U_cur, hU_prev = hU_cur;
  Mat Y(p, p), hY(p, p), U_new(p, p), hU_new(p, p), G(p, p), FP(p, p);
  double t = 1.0;
  bool lipschitz_bumped = false;
  double residual = kInf;

  auto step_from = [&](const Mat& base, const Mat& hbase, Mat& out) {
    G = base - (hbase + Q) / L;
    kernels::active().clamp_unit(G.size(), G.data(), out.data());
  };
  auto fixed_point_residual = [&](const Mat& U, const Mat& hU) {
    step_from(U, hU, FP);
    return std::sqrt(kernels::active().sum_sq_diff(U.size(), U.data(),
                                                   FP.data())) /
           std::max(1.0, U.norm());
  };

  int iters = 0;
  for (; iters < ctrl.max_iter; ++iters) {
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double m = (t - 1.0) / t_new;
    Y = U_cur + m * (U_cur - U_prev);
    hY = (1.0 + m) * hU_cur - m * hU_prev;

    step_from(Y, hY, U_new);
    hmap(U_new, hU_new);
    double phi_new = phi(U_new, hU_new);

    if (phi_new > phi_cur) {
      t = 1.0;
      step_from(U_cur, hU_cur, U_new);
      hmap(U_new, hU_new);
      phi_new = phi(U_new, hU_new);
      if (phi_new > phi_cur && !lipschitz_bumped) {
        L *= 2.0;
        lipschitz_bumped = true;
        step_from(U_cur, hU_cur, U_new);
        hmap(U_new, hU_new);
        phi_new = phi(U_new, hU_new);
      }
    } else {
      t = t_new;
    }

    const double change =
        std::sqrt(kernels::active().sum_sq_diff(U_new.size(), U_new.data(),
                                                U_cur.data())) /
        std::max(1.0, U_new.norm());
    U_prev.swap(U_cur);
    hU_prev.swap(hU_cur);
    U_cur.swap(U_new);
    hU_cur.swap(hU_new);
    phi_cur = phi_new;

    if (change <= 0.5 * ctrl.tol || (iters + 1) % 16 == 0) {
      residual = fixed_point_residual(U_cur, hU_cur);
      if (residual <= ctrl.tol) {
        ++iters;
        break;
      }
    }
  }

  if (!(residual <= ctrl.tol)) {
    residual = fixed_point_residual(U_cur, hU_cur);
    if (residual > ctrl.tol) {
      throw SubsolverFailure("solve_dual_graph: no convergence in " +
                                 std::to_string(ctrl.max_iter) + " iterations",
                             residual);
    }
  }

  DualGraphResult res;
  res.U = 0.5 * (U_cur + U_cur.transpose());
  res.inner_iters = iters;
  res.residual = residual;
  res.lipschitz = L;
  return res;
}

Mat recover_primal_direction(const Mat& Theta, const Mat& Sigma_hat,
                             double rho, const Mat& U_star, Counters* ct) {
  Mat T1 = Theta * Sigma_hat;
  Mat D = -((T1 - Mat::Identity(Theta.rows(), Theta.cols())) * Theta +
            rho * Theta * U_star * Theta);
  if (ct) ct->matmul += 4;
  return 0.5 * (D + D.transpose());
}

double dual_graph_decrement(const Mat& Theta, const Mat& Sigma_hat, double rho,
                            const Mat& U_star, bool* clamped, Counters* ct) {
  const Index p = Theta.rows();
  Mat W = Theta * (Sigma_hat + rho * U_star);
  if (ct) ++ct->matmul;
  const double tr_w = W.trace();
  const double tr_w2 = W.cwiseProduct(W.transpose()).sum();
  double lam_sq = static_cast<double>(p) - 2.0 * tr_w + tr_w2;
  if (clamped) *clamped = false;
  if (lam_sq < 0) {
    if (clamped) *clamped = true;
    lam_sq = 0.0;
  }
  return std::sqrt(lam_sq);
}

}  // namespace scomp
