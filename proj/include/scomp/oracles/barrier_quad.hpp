#pragma once

#include <Eigen/Cholesky>

#include <memory>

#include "scomp/oracle.hpp"

namespace scomp {

// Log-barrier of a concave quadratic:
//   f(x) = -t log( sigma^2 - ||A x - y||^2 ),  dom f = { ||Ax-y||^2 < sigma^2 }.
// Standard self-concordant for t >= 1.
class BarrierQuadOracle final : public SmoothOracle {
 public:
  BarrierQuadOracle(Mat A, Vec y, double sigma2, double t = 1.0);

  class Point final : public OraclePoint {
   public:
    Point(const BarrierQuadOracle* oracle, Vec x, Counters* ct);

    bool in_domain() const override { return ok_; }
    double value() const override;
    const Vec& gradient() const override;
    void hess_vec(const Vec& v, Vec& out) const override;
    void hess_solve(const Vec& r, Vec& out) const override;

   private:
    const BarrierQuadOracle* oracle_;
    Vec x_;
    Counters* ct_;
    bool ok_ = false;
    Vec resid_;       // A x - y
    double slack_ = 0.0;  // sigma^2 - ||resid||^2
    mutable Vec grad_;
    mutable Vec atr_;  // A' resid
    mutable Eigen::LDLT<Mat> ldlt_;
    mutable bool ldlt_ready_ = false;
  };

  Index dim() const override { return A_.cols(); }
  bool has_hess_solve() const override { return true; }
  std::unique_ptr<OraclePoint> at(const Vec& x,
                                  Counters* ct = nullptr) const override;

 private:
  friend class Point;
  Mat A_;
  Vec y_;
  double sigma2_;
  double t_;
  Mat ata_;
};

}  // namespace scomp
