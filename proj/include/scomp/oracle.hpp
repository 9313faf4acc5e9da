#pragma once

#include <limits>
#include <memory>

#include "scomp/types.hpp"

namespace scomp {

// Everything a solver needs from the smooth part f at one point. A handle
// may cache a factorization (e.g. one Cholesky per point for log-det); it is
// owned by a single solve and must not outlive the Counters it reports to.
class OraclePoint {
 public:
  virtual ~OraclePoint() = default;

  virtual bool in_domain() const = 0;

  // f(x), or +inf when x is outside dom f. Out-of-domain probes are values,
  // not errors: line searches rely on cheap infeasibility signals.
  virtual double value() const = 0;

  // Only valid when in_domain().
  virtual const Vec& gradient() const = 0;
  virtual void hess_vec(const Vec& v, Vec& out) const = 0;
  virtual void hess_solve(const Vec& r, Vec& out) const;

  Vec hess_vec(const Vec& v) const {
    Vec out(v.size());
    hess_vec(v, out);
    return out;
  }
  Vec hess_solve(const Vec& r) const {
    Vec out(r.size());
    hess_solve(r, out);
    return out;
  }
};

// Immutable oracle for a standard self-concordant f. Safe to share across
// concurrent solves; all per-point state lives in the OraclePoint.
class SmoothOracle {
 public:
  virtual ~SmoothOracle() = default;

  virtual Index dim() const = 0;
  virtual bool has_hess_solve() const { return false; }
  virtual std::unique_ptr<OraclePoint> at(const Vec& x,
                                          Counters* ct = nullptr) const = 0;

  double value(const Vec& x, Counters* ct = nullptr) const {
    return at(x, ct)->value();
  }
  bool in_domain(const Vec& x, Counters* ct = nullptr) const {
    return at(x, ct)->in_domain();
  }
  Vec gradient(const Vec& x, Counters* ct = nullptr) const {
    return at(x, ct)->gradient();
  }
};

// ||v||_x = sqrt(v' H(x) v). Clamps quadratic-form noise in [-1e-12*|v|^2, 0]
// to zero; anything more negative is an oracle contract violation.
double local_norm(const OraclePoint& pt, const Vec& v);

// ||r||_x^* = sqrt(r' H(x)^-1 r).
double dual_local_norm(const OraclePoint& pt, const Vec& r);

// (M^2/4) * f, mapping an M-self-concordant oracle to a standard one.
// M = 2 returns the input unchanged.
std::shared_ptr<const SmoothOracle> standardize(
    std::shared_ptr<const SmoothOracle> oracle, double M);

}  // namespace scomp
