#include "scomp/prox/tv.hpp"

#include <cmath>

#include "scomp/kernels.hpp"

namespace scomp {

Vec prox_tv_nonneg(const Vec& w, Index height, Index width, double rho_k,
                   const TvControls& ctrl, TvWorkspace* ws) {
  const Index n = height * width;
  if (w.size() != n) throw DomainError("prox_tv_nonneg: image size mismatch");
  if (!w.allFinite()) throw DomainError("prox_tv_nonneg: w must be finite");
  if (rho_k < 0) throw DomainError("prox_tv_nonneg: rho_k must be >= 0");
  const auto& K = kernels::active();

  if (rho_k == 0.0) {
    Vec out(n);
    K.relu_sub(n, w.data(), 0.0, w.data(), out.data());
    if (ws) {
      ws->last_iters = 0;
      ws->last_residual = 0.0;
    }
    return out;
  }

  TvWorkspace local;
  TvWorkspace& state = ws ? *ws : local;
  if (state.px.size() != n) state.px = Vec::Zero(n);
  if (state.py.size() != n) state.py = Vec::Zero(n);

  Vec rx = state.px, ry = state.py;
  Vec px_new(n), py_new(n), adj(n), gx(n), gy(n);
  Vec x(n), x_prev(n);
  const double step = 1.0 / (8.0 * rho_k);
  double t = 1.0;
  double residual = kInf;
  int iters = 0;

  for (int j = 0; j < ctrl.inner_max_iter; ++j) {
    K.tv_adjoint(height, width, rx.data(), ry.data(), adj.data());
    K.relu_sub(n, w.data(), rho_k, adj.data(), x.data());
    K.tv_diff(height, width, x.data(), gx.data(), gy.data());
    K.scaled_add_clamp(n, rx.data(), step, gx.data(), px_new.data());
    K.scaled_add_clamp(n, ry.data(), step, gy.data(), py_new.data());

    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double m = (t - 1.0) / t_new;
    rx = px_new + m * (px_new - state.px);
    ry = py_new + m * (py_new - state.py);
    state.px.swap(px_new);
    state.py.swap(py_new);
    t = t_new;
    ++iters;

    if (j > 0) {
      residual = std::sqrt(K.sum_sq_diff(n, x.data(), x_prev.data())) /
                 std::max(1.0, x.norm());
      if (residual <= ctrl.inner_tol) break;
    }
    x_prev.swap(x);
  }

  state.last_iters = iters;
  state.last_residual = residual;
  if (residual > 10.0 * ctrl.inner_tol) {
    throw SubsolverFailure("prox_tv_nonneg: iteration budget exhausted",
                           residual);
  }

  K.tv_adjoint(height, width, state.px.data(), state.py.data(), adj.data());
  K.relu_sub(n, w.data(), rho_k, adj.data(), x.data());
  return x;
}

TVNonnegReg::TVNonnegReg(double weight, Index height, Index width,
                         TvControls ctrl)
    : weight_(weight), height_(height), width_(width), ctrl_(ctrl) {
  if (weight_ < 0) throw DomainError("TVNonnegReg: weight must be >= 0");
  if (height_ <= 0 || width_ <= 0) {
    throw DomainError("TVNonnegReg: image dimensions must be positive");
  }
}

double TVNonnegReg::eval(const Vec& x) const {
  const Index n = height_ * width_;
  if (x.size() != n) throw DomainError("TVNonnegReg: image size mismatch");
  if ((x.array() < 0).any()) return kInf;
  Vec dx(n), dy(n);
  kernels::active().tv_diff(height_, width_, x.data(), dx.data(), dy.data());
  return weight_ * (dx.lpNorm<1>() + dy.lpNorm<1>());
}

void TVNonnegReg::prox_diag(const Vec& u, const Vec& d, Vec& out,
                            ProxWorkspace* ws, Counters* ct) const {
  if (d.size() != u.size()) throw DomainError("TVNonnegReg: size mismatch");
  const double L = d(0);
  if (!(L > 0)) throw DomainError("TVNonnegReg: metric must be positive");
  if ((d.array() != L).any()) {
    throw MetricError("TVNonnegReg: prox supports uniform metrics L*I only");
  }
  auto* tvws = dynamic_cast<TvWorkspace*>(ws);
  if (ws && !tvws) throw MetricError("TVNonnegReg: foreign workspace type");
  out = prox_tv_nonneg(u / L, height_, width_, weight_ / L, ctrl_, tvws);
  if (ct) ++ct->prox;
}

}  // namespace scomp
