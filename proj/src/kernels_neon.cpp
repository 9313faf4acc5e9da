// NEON kernel variants for aarch64, where 128-bit SIMD is baseline.
#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "scomp/kernels.hpp"

namespace scomp::kernels {
namespace {

inline float64x2_t clamp1(float64x2_t v) {
  return vminq_f64(vmaxq_f64(v, vdupq_n_f64(-1.0)), vdupq_n_f64(1.0));
}

inline float64x2_t copysign_pos(float64x2_t mag, float64x2_t src) {
  // mag >= 0; transplant src's sign bit.
  const uint64x2_t sign = vdupq_n_u64(0x8000000000000000ull);
  return vreinterpretq_f64_u64(
      vorrq_u64(vreinterpretq_u64_f64(mag),
                vandq_u64(vreinterpretq_u64_f64(src), sign)));
}

void soft_threshold(Index n, const double* x, double t, double* out) {
  const float64x2_t vt = vdupq_n_f64(t);
  const float64x2_t z = vdupq_n_f64(0.0);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    const float64x2_t shr = vmaxq_f64(vsubq_f64(vabsq_f64(v), vt), z);
    vst1q_f64(out + i, copysign_pos(shr, v));
  }
  for (; i < n; ++i) {
    const double m = std::fabs(x[i]) - t;
    out[i] = m > 0 ? std::copysign(m, x[i]) : 0.0;
  }
}

void soft_threshold_vt(Index n, const double* x, const double* t,
                       double* out) {
  const float64x2_t z = vdupq_n_f64(0.0);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    const float64x2_t shr =
        vmaxq_f64(vsubq_f64(vabsq_f64(v), vld1q_f64(t + i)), z);
    vst1q_f64(out + i, copysign_pos(shr, v));
  }
  for (; i < n; ++i) {
    const double m = std::fabs(x[i]) - t[i];
    out[i] = m > 0 ? std::copysign(m, x[i]) : 0.0;
  }
}

void clamp_unit(Index n, const double* x, double* out) {
  Index i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, clamp1(vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = std::fmin(std::fmax(x[i], -1.0), 1.0);
}

double dot(Index n, const double* a, const double* b) {
  float64x2_t acc = vdupq_n_f64(0.0);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_diff(Index n, const double* a, const double* b) {
  float64x2_t acc = vdupq_n_f64(0.0);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double weighted_ratio_sumsq(Index n, const double* w, const double* num,
                            const double* den) {
  float64x2_t acc = vdupq_n_f64(0.0);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vdivq_f64(vld1q_f64(num + i), vld1q_f64(den + i));
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(w + i), r), r);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double r = num[i] / den[i];
    s += w[i] * r * r;
  }
  return s;
}

void one_minus_ratio(Index n, const double* y, const double* t, double* out) {
  const float64x2_t one = vdupq_n_f64(1.0);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i,
              vsubq_f64(one, vdivq_f64(vld1q_f64(y + i), vld1q_f64(t + i))));
  }
  for (; i < n; ++i) out[i] = 1.0 - y[i] / t[i];
}

void axpy(Index n, double a, const double* x, double* y) {
  const float64x2_t va = vdupq_n_f64(a);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void relu_sub(Index n, const double* w, double s, const double* v,
              double* out) {
  const float64x2_t vs = vdupq_n_f64(s);
  const float64x2_t z = vdupq_n_f64(0.0);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vfmsq_f64(vld1q_f64(w + i), vs, vld1q_f64(v + i));
    vst1q_f64(out + i, vmaxq_f64(r, z));
  }
  for (; i < n; ++i) {
    const double r = w[i] - s * v[i];
    out[i] = r > 0 ? r : 0.0;
  }
}

void scaled_add_clamp(Index n, const double* u, double c, const double* v,
                      double* out) {
  const float64x2_t vc = vdupq_n_f64(c);
  Index i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i,
              clamp1(vfmaq_f64(vld1q_f64(u + i), vc, vld1q_f64(v + i))));
  }
  for (; i < n; ++i) {
    out[i] = std::fmin(std::fmax(u[i] + c * v[i], -1.0), 1.0);
  }
}

void tv_diff(Index h, Index w, const double* x, double* dx, double* dy) {
  for (Index i = 0; i < h; ++i) {
    const double* row = x + i * w;
    double* dxr = dx + i * w;
    Index j = 0;
    for (; j + 3 <= w; j += 2) {
      vst1q_f64(dxr + j, vsubq_f64(vld1q_f64(row + j + 1), vld1q_f64(row + j)));
    }
    for (; j + 1 < w; ++j) dxr[j] = row[j + 1] - row[j];
    dxr[w - 1] = 0.0;
  }
  for (Index i = 0; i + 1 < h; ++i) {
    const double* row = x + i * w;
    const double* next = x + (i + 1) * w;
    double* dyr = dy + i * w;
    Index j = 0;
    for (; j + 2 <= w; j += 2) {
      vst1q_f64(dyr + j, vsubq_f64(vld1q_f64(next + j), vld1q_f64(row + j)));
    }
    for (; j < w; ++j) dyr[j] = next[j] - row[j];
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

const Table* neon_table() {
  static const Table table = {
      "neon",          soft_threshold,   soft_threshold_vt,
      clamp_unit,      dot,              sum_sq_diff,
      weighted_ratio_sumsq, one_minus_ratio, axpy,
      relu_sub,        scaled_add_clamp, tv_diff,
      tv_adjoint,
  };
  return &table;
}

}  // namespace scomp::kernels

#endif  // __aarch64__
