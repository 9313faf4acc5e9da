#pragma once

#include <Eigen/Cholesky>

#include <memory>

#include "scomp/oracle.hpp"

namespace scomp {

// Unknown-variance LASSO smooth part over x = (beta, sigma), sigma last:
//   f(beta, sigma) = -log(sigma) + (1/2n) || X beta - sigma y ||^2,
// standard self-concordant on {sigma > 0}.
class HetLassoOracle final : public SmoothOracle {
 public:
  HetLassoOracle(Mat X, Vec y);

  class Point final : public OraclePoint {
   public:
    Point(const HetLassoOracle* oracle, Vec x, Counters* ct);

    bool in_domain() const override { return ok_; }
    double value() const override;
    const Vec& gradient() const override;
    void hess_vec(const Vec& v, Vec& out) const override;
    void hess_solve(const Vec& r, Vec& out) const override;

    double sigma() const { return x_(x_.size() - 1); }

   private:
    const HetLassoOracle* oracle_;
    Vec x_;
    Counters* ct_;
    bool ok_ = false;
    Vec z_;  // X beta - sigma y
    mutable Vec grad_;
    mutable Eigen::LDLT<Mat> ldlt_;
    mutable bool ldlt_ready_ = false;
  };

  Index dim() const override { return X_.cols() + 1; }
  bool has_hess_solve() const override { return true; }
  std::unique_ptr<OraclePoint> at(const Vec& x,
                                  Counters* ct = nullptr) const override;

  // Closed-form decrement ||d||_x using z = X d_beta only:
  //   lambda^2 = (sigma^-2 + y'y/n) d_sigma^2 + z'z/n - 2 d_sigma y'z / n.
  double decrement(double sigma, const Vec& d) const;

  const Mat& X() const { return X_; }
  const Vec& y() const { return y_; }

 private:
  friend class Point;
  Mat X_;
  Vec y_;
  Vec xty_;     // X' y
  double yty_;  // y' y
  Mat xtx_;     // X' X (cached for hess_solve)
};

}  // namespace scomp
