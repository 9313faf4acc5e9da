#include "scomp/kernels.hpp"

#include <cmath>

namespace scomp::kernels {
namespace {

void soft_threshold(Index n, const double* x, double t, double* out) {
  for (Index i = 0; i < n; ++i) {
    const double m = std::fabs(x[i]) - t;
    out[i] = m > 0 ? std::copysign(m, x[i]) : 0.0;
  }
}

void soft_threshold_vt(Index n, const double* x, const double* t,
                       double* out) {
  for (Index i = 0; i < n; ++i) {
    const double m = std::fabs(x[i]) - t[i];
    out[i] = m > 0 ? std::copysign(m, x[i]) : 0.0;
  }
}

void clamp_unit(Index n, const double* x, double* out) {
  for (Index i = 0; i < n; ++i) {
    out[i] = std::fmin(std::fmax(x[i], -1.0), 1.0);
  }
}

double dot(Index n, const double* a, const double* b) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_diff(Index n, const double* a, const double* b) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double weighted_ratio_sumsq(Index n, const double* w, const double* num,
                            const double* den) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double r = num[i] / den[i];
    s += w[i] * r * r;
  }
  return s;
}

void one_minus_ratio(Index n, const double* y, const double* t, double* out) {
  for (Index i = 0; i < n; ++i) out[i] = 1.0 - y[i] / t[i];
}

void axpy(Index n, double a, const double* x, double* y) {
  for (Index i = 0; i < n; ++i) y[i] += a * x[i];
}

void relu_sub(Index n, const double* w, double s, const double* v,
              double* out) {
  for (Index i = 0; i < n; ++i) {
    const double z = w[i] - s * v[i];
    out[i] = z > 0 ? z : 0.0;
  }
}

void scaled_add_clamp(Index n, const double* u, double c, const double* v,
                      double* out) {
  for (Index i = 0; i < n; ++i) {
    out[i] = std::fmin(std::fmax(u[i] + c * v[i], -1.0), 1.0);
  }
}

void tv_diff(Index h, Index w, const double* x, double* dx, double* dy) {
  for (Index i = 0; i < h; ++i) {
    const double* row = x + i * w;
    double* dxr = dx + i * w;
    for (Index j = 0; j + 1 < w; ++j) dxr[j] = row[j + 1] - row[j];
    dxr[w - 1] = 0.0;
  }
  for (Index i = 0; i + 1 < h; ++i) {
    const double* row = x + i * w;
    const double* next = x + (i + 1) * w;
    double* dyr = dy + i * w;
    for (Index j = 0; j < w; ++j) dyr[j] = next[j] - row[j];
  }
  for (Index j = 0; j < w; ++j) dy[(h - 1) * w + j] = 0.0;
}

void tv_adjoint(Index h, Index w, const double* px, const double* py,
                double* out) {
  for (Index i = 0; i < h; ++i) {
    const double* pxr = px + i * w;
    double* o = out + i * w;
    for (Index j = 0; j < w; ++j) {
      double v = 0.0;
      if (j > 0) v += pxr[j - 1];
      if (j + 1 < w) v -= pxr[j];
      if (i > 0) v += py[(i - 1) * w + j];
      if (i + 1 < h) v -= py[i * w + j];
      o[j] = v;
    }
  }
}

}  // namespace

const Table& scalar() {
  static const Table table = {
      "scalar",        soft_threshold,   soft_threshold_vt,
      clamp_unit,      dot,              sum_sq_diff,
      weighted_ratio_sumsq, one_minus_ratio, axpy,
      relu_sub,        scaled_add_clamp, tv_diff,
      tv_adjoint,
  };
  return table;
}

}  // namespace scomp::kernels
