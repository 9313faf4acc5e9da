#pragma once

#include <Eigen/Core>

#include <vector>

namespace scomp::kernels {

using Index = Eigen::Index;

// Elementwise/stencil kernels on the solver hot paths. Each entry has a
// scalar reference implementation and, where the build target supports it,
// an AVX2 or NEON variant; `active()` picks one at process start. All
// variants must agree with `scalar()` to rounding (equivalence-tested).
//
// Images are row-major h x w. Forward differences use a replicate boundary:
// the last column of dx and last row of dy are zero, and the adjoint never
// reads them.
struct Table {
  const char* name;

  // out[i] = sign(x[i]) * max(|x[i]| - t, 0)
  void (*soft_threshold)(Index n, const double* x, double t, double* out);
  // per-coordinate thresholds t[i] >= 0
  void (*soft_threshold_vt)(Index n, const double* x, const double* t,
                            double* out);
  // out[i] = min(max(x[i], -1), 1)
  void (*clamp_unit)(Index n, const double* x, double* out);
  double (*dot)(Index n, const double* a, const double* b);
  // sum (a[i] - b[i])^2
  double (*sum_sq_diff)(Index n, const double* a, const double* b);
  // sum w[i] * (num[i] / den[i])^2   (den[i] != 0)
  double (*weighted_ratio_sumsq)(Index n, const double* w, const double* num,
                                 const double* den);
  // out[i] = 1 - y[i] / t[i]
  void (*one_minus_ratio)(Index n, const double* y, const double* t,
                          double* out);
  // y[i] += a * x[i]
  void (*axpy)(Index n, double a, const double* x, double* y);
  // out[i] = max(w[i] - s * v[i], 0)
  void (*relu_sub)(Index n, const double* w, double s, const double* v,
                   double* out);
  // out[i] = min(max(u[i] + c * v[i], -1), 1)
  void (*scaled_add_clamp)(Index n, const double* u, double c, const double* v,
                           double* out);
  // dx[i,j] = x[i,j+1] - x[i,j] (j < w-1, else 0); dy analogous over rows
  void (*tv_diff)(Index h, Index w, const double* x, double* dx, double* dy);
  // out = Dx' px + Dy' py for the operator above
  void (*tv_adjoint)(Index h, Index w, const double* px, const double* py,
                     double* out);
};

// Scalar reference table (always available).
const Table& scalar();

// Best table for the running CPU. Honors SCOMP_SIMD=scalar|avx2|neon as an
// override; unknown or unsupported values fall back to scalar.
const Table& active();

// Every table the build provides and the CPU can run (scalar first).
std::vector<const Table*> available();

}  // namespace scomp::kernels
