#pragma once

#include "scomp/prox/regularizer.hpp"

namespace scomp {

struct TvControls {
  double inner_tol = 1e-6;   // relative fixed-point residual on the image
  int inner_max_iter = 200;
};

// Warm-start carrier for the dual fast-gradient-projection solver.
class TvWorkspace final : public ProxWorkspace {
 public:
  Vec px, py;     // dual variables, image-sized
  int last_iters = 0;
  double last_residual = 0.0;
};

// Anisotropic TV prox with a nonnegativity box:
//   argmin_{x >= 0} 1/2 ||x - w||^2 + rho_k ||D x||_1,
// solved by dual fast gradient projection with fixed step 1/8 (the 2-D
// forward-difference operator norm bound). rho_k = 0 degrades to max(w, 0).
// Throws SubsolverFailure when the iteration budget is exhausted with a
// residual above 10x the tolerance.
Vec prox_tv_nonneg(const Vec& w, Index height, Index width, double rho_k,
                   const TvControls& ctrl, TvWorkspace* ws = nullptr);

// g(x) = weight * ||D x||_1 + indicator(x >= 0) over height x width images
// stored row-major. The prox supports uniform metrics d = L * ones only.
class TVNonnegReg final : public Regularizer {
 public:
  TVNonnegReg(double weight, Index height, Index width,
              TvControls ctrl = TvControls{});

  using Regularizer::prox_diag;
  double eval(const Vec& x) const override;
  void prox_diag(const Vec& u, const Vec& d, Vec& out, ProxWorkspace* ws,
                 Counters* ct) const override;
  bool separable() const override { return false; }
  std::unique_ptr<ProxWorkspace> make_workspace() const override {
    return std::make_unique<TvWorkspace>();
  }

  double weight() const { return weight_; }
  Index height() const { return height_; }
  Index width() const { return width_; }
  const TvControls& controls() const { return ctrl_; }

 private:
  double weight_;
  Index height_, width_;
  TvControls ctrl_;
};

}  // namespace scomp
