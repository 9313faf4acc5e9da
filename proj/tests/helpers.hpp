#pragma once

#include <Eigen/Cholesky>

#include <cmath>
#include <functional>
#include <vector>

#include "scomp/oracle.hpp"
#include "scomp/rng.hpp"

namespace scomp::testing {

// Central finite differences of f along coordinate directions.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f,
                       const Vec& x, double h) {
  Vec g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Central difference of the gradient along direction v.
inline Vec fd_hess_vec(const std::function<Vec(const Vec&)>& grad,
                       const Vec& x, const Vec& v, double h) {
  const double s = h / std::max(v.norm(), 1e-12);
  return (grad(x + s * v) - grad(x - s * v)) / (2.0 * s);
}

// phi(t) = f(x + t v) derivatives via five-point stencils.
struct ScalarDerivs {
  double d2 = 0;
  double d3 = 0;
};

inline ScalarDerivs fd_phi_derivs(const std::function<double(double)>& phi,
                                  double h) {
  const double f2p = phi(2 * h), f1p = phi(h), f0 = phi(0), f1m = phi(-h),
               f2m = phi(-2 * h);
  ScalarDerivs d;
  d.d2 = (-f2p + 16 * f1p - 30 * f0 + 16 * f1m - f2m) / (12 * h * h);
  d.d3 = (f2p - 2 * f1p + 2 * f1m - f2m) / (2 * h * h * h);
  return d;
}

// Brute-force minimizer of 1/2 x'Hx + q'x + rho ||x||_1 by sign-pattern
// enumeration (3^n patterns); exact up to the dense solve.
inline Vec l1_quadratic_bruteforce(const Mat& H, const Vec& q, double rho) {
  const Index n = H.rows();
  std::vector<int> pattern(static_cast<size_t>(n), -1);
  Vec best;
  double best_val = kInf;
  const long total = static_cast<long>(std::pow(3.0, static_cast<double>(n)));
  for (long code = 0; code < total; ++code) {
    long c = code;
    std::vector<Index> active;
    for (Index i = 0; i < n; ++i) {
      pattern[static_cast<size_t>(i)] = static_cast<int>(c % 3) - 1;  // -1,0,1
      c /= 3;
      if (pattern[static_cast<size_t>(i)] != 0) active.push_back(i);
    }
    Vec x = Vec::Zero(n);
    if (!active.empty()) {
      const Index m = static_cast<Index>(active.size());
      Mat Hs(m, m);
      Vec rhs(m);
      for (Index a = 0; a < m; ++a) {
        rhs(a) = -(q(active[static_cast<size_t>(a)]) +
                   rho * pattern[static_cast<size_t>(
                             active[static_cast<size_t>(a)])]);
        for (Index b = 0; b < m; ++b) {
          Hs(a, b) = H(active[static_cast<size_t>(a)],
                       active[static_cast<size_t>(b)]);
        }
      }
      const Vec xs = Hs.ldlt().solve(rhs);
      bool sign_ok = true;
      for (Index a = 0; a < m; ++a) {
        const int s = pattern[static_cast<size_t>(active[static_cast<size_t>(a)])];
        if (xs(a) * s < 0) {
          sign_ok = false;
          break;
        }
        x(active[static_cast<size_t>(a)]) = xs(a);
      }
      if (!sign_ok) continue;
    }
    // Zero coordinates must satisfy |(Hx + q)_i| <= rho.
    const Vec grad = H * x + q;
    bool kkt_ok = true;
    for (Index i = 0; i < n; ++i) {
      if (pattern[static_cast<size_t>(i)] == 0 &&
          std::fabs(grad(i)) > rho + 1e-10) {
        kkt_ok = false;
        break;
      }
    }
    if (!kkt_ok) continue;
    const double val = 0.5 * x.dot(H * x) + q.dot(x) + rho * x.lpNorm<1>();
    if (val < best_val) {
      best_val = val;
      best = x;
    }
  }
  if (best.size() == 0) throw Error("bruteforce: no KKT pattern found");
  return best;
}

inline Mat random_spd(Rng& rng, Index n, double shift = 0.5) {
  Mat A(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) A(i, j) = rng.normal();
  }
  Mat S = A * A.transpose() / static_cast<double>(n);
  S += shift * Mat::Identity(n, n);
  return S;
}

// Random y = x + r * u / ||u||_x inside the Dikin ball of radius r < 1.
inline Vec dikin_point(const OraclePoint& pt, const Vec& x, Rng& rng,
                       double r) {
  Vec u(x.size());
  for (Index i = 0; i < x.size(); ++i) u(i) = rng.normal();
  const double un = local_norm(pt, u);
  if (!(un > 0)) throw Error("dikin_point: degenerate direction");
  return x + (r / un) * u;
}

}  // namespace scomp::testing
