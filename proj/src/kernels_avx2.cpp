// AVX2 kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64; the dispatcher only installs it when the CPU
// reports both features.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "scomp/kernels.hpp"

namespace scomp::kernels {
namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);
const __m256d kZero = _mm256_setzero_pd();
const __m256d kOne = _mm256_set1_pd(1.0);
const __m256d kNegOne = _mm256_set1_pd(-1.0);

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void soft_threshold(Index n, const double* x, double t, double* out) {
  const __m256d vt = _mm256_set1_pd(t);
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d mag = _mm256_andnot_pd(kSignMask, v);
    const __m256d shr = _mm256_max_pd(_mm256_sub_pd(mag, vt), kZero);
    _mm256_storeu_pd(out + i, _mm256_or_pd(shr, _mm256_and_pd(v, kSignMask)));
  }
  for (; i < n; ++i) {
    const double m = std::fabs(x[i]) - t;
    out[i] = m > 0 ? std::copysign(m, x[i]) : 0.0;
  }
}

void soft_threshold_vt(Index n, const double* x, const double* t,
                       double* out) {
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d vt = _mm256_loadu_pd(t + i);
    const __m256d mag = _mm256_andnot_pd(kSignMask, v);
    const __m256d shr = _mm256_max_pd(_mm256_sub_pd(mag, vt), kZero);
    _mm256_storeu_pd(out + i, _mm256_or_pd(shr, _mm256_and_pd(v, kSignMask)));
  }
  for (; i < n; ++i) {
    const double m = std::fabs(x[i]) - t[i];
    out[i] = m > 0 ? std::copysign(m, x[i]) : 0.0;
  }
}

void clamp_unit(Index n, const double* x, double* out) {
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(v, kNegOne), kOne));
  }
  for (; i < n; ++i) out[i] = std::fmin(std::fmax(x[i], -1.0), 1.0);
}

double dot(Index n, const double* a, const double* b) {
  __m256d acc = kZero;
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_diff(Index n, const double* a, const double* b) {
  __m256d acc = kZero;
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double weighted_ratio_sumsq(Index n, const double* w, const double* num,
                            const double* den) {
  __m256d acc = kZero;
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_div_pd(_mm256_loadu_pd(num + i), _mm256_loadu_pd(den + i));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), r), r, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double r = num[i] / den[i];
    s += w[i] * r * r;
  }
  return s;
}

void one_minus_ratio(Index n, const double* y, const double* t, double* out) {
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_div_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(t + i));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(kOne, r));
  }
  for (; i < n; ++i) out[i] = 1.0 - y[i] / t[i];
}

void axpy(Index n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void relu_sub(Index n, const double* w, double s, const double* v,
              double* out) {
  const __m256d vs = _mm256_set1_pd(s);
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d z = _mm256_fnmadd_pd(vs, _mm256_loadu_pd(v + i),
                                       _mm256_loadu_pd(w + i));
    _mm256_storeu_pd(out + i, _mm256_max_pd(z, kZero));
  }
  for (; i < n; ++i) {
    const double z = w[i] - s * v[i];
    out[i] = z > 0 ? z : 0.0;
  }
}

void scaled_add_clamp(Index n, const double* u, double c, const double* v,
                      double* out) {
  const __m256d vc = _mm256_set1_pd(c);
  Index i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d z =
        _mm256_fmadd_pd(vc, _mm256_loadu_pd(v + i), _mm256_loadu_pd(u + i));
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(z, kNegOne), kOne));
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
    for (; j + 5 <= w; j += 4) {
      const __m256d a = _mm256_loadu_pd(row + j);
      const __m256d b = _mm256_loadu_pd(row + j + 1);
      _mm256_storeu_pd(dxr + j, _mm256_sub_pd(b, a));
    }
    for (; j + 1 < w; ++j) dxr[j] = row[j + 1] - row[j];
    dxr[w - 1] = 0.0;
  }
  for (Index i = 0; i + 1 < h; ++i) {
    const double* row = x + i * w;
    const double* next = x + (i + 1) * w;
    double* dyr = dy + i * w;
    Index j = 0;
    for (; j + 4 <= w; j += 4) {
      _mm256_storeu_pd(
          dyr + j,
          _mm256_sub_pd(_mm256_loadu_pd(next + j), _mm256_loadu_pd(row + j)));
    }
    for (; j < w; ++j) dyr[j] = next[j] - row[j];
  }
  for (Index j = 0; j < w; ++j) dy[(h - 1) * w + j] = 0.0;
}

void tv_adjoint_scalar_cols(Index h, Index w, const double* px,
                            const double* py, double* out, Index i, Index j0,
                            Index j1) {
  const double* pxr = px + i * w;
  double* o = out + i * w;
  for (Index j = j0; j < j1; ++j) {
    double v = 0.0;
    if (j > 0) v += pxr[j - 1];
    if (j + 1 < w) v -= pxr[j];
    if (i > 0) v += py[(i - 1) * w + j];
    if (i + 1 < h) v -= py[i * w + j];
    o[j] = v;
  }
}

void tv_adjoint(Index h, Index w, const double* px, const double* py,
                double* out) {
  for (Index i = 0; i < h; ++i) {
    const double* pxr = px + i * w;
    double* o = out + i * w;
    tv_adjoint_scalar_cols(h, w, px, py, out, i, 0, std::min<Index>(1, w));
    // Interior columns 1..w-2 as vectors; tail scalar.
    Index j = 1;
    for (; j + 4 <= w - 1; j += 4) {
      __m256d v = _mm256_sub_pd(_mm256_loadu_pd(pxr + j - 1),
                                _mm256_loadu_pd(pxr + j));
      if (i > 0) v = _mm256_add_pd(v, _mm256_loadu_pd(py + (i - 1) * w + j));
      if (i + 1 < h) v = _mm256_sub_pd(v, _mm256_loadu_pd(py + i * w + j));
      _mm256_storeu_pd(o + j, v);
    }
    tv_adjoint_scalar_cols(h, w, px, py, out, i, j, w);
  }
}

}  // namespace

const Table* avx2_table() {
  static const Table table = {
      "avx2",          soft_threshold,   soft_threshold_vt,
      clamp_unit,      dot,              sum_sq_diff,
      weighted_ratio_sumsq, one_minus_ratio, axpy,
      relu_sub,        scaled_add_clamp, tv_diff,
      tv_adjoint,
  };
  return &table;
}

}  // namespace scomp::kernels

#endif  // x86-64
