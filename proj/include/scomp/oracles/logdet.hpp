#pragma once

#include <Eigen/Cholesky>

#include <memory>

#include "scomp/oracle.hpp"

namespace scomp {

// f(Theta) = -log det(Theta) + tr(SigmaHat * Theta) on {Theta > 0}.
//
// The ambient dimension is p^2 (vec view), but matrix-shaped entry points
// are provided so graph solvers never pay an explicit vectorization. The
// Kronecker Hessian is never materialized: hess_vec is Theta^-1 V Theta^-1
// and hess_solve is Theta R Theta.
class LogDetOracle final : public SmoothOracle {
 public:
  explicit LogDetOracle(Mat sigma_hat);

  // One attempted Cholesky per point supplies the domain test, log det and
  // Theta^-1; it is cached on this handle and bumps ct->chol exactly once.
  class Point final : public OraclePoint {
   public:
    Point(const LogDetOracle* oracle, Mat theta, Counters* ct);

    bool in_domain() const override { return ok_; }
    double value() const override;
    const Vec& gradient() const override;
    void hess_vec(const Vec& v, Vec& out) const override;
    void hess_solve(const Vec& r, Vec& out) const override;

    const Mat& theta() const { return theta_; }
    double logdet() const;
    const Mat& theta_inv() const;
    Mat gradient_mat() const;
    Mat hess_vec_mat(const Mat& v) const;
    Mat hess_solve_mat(const Mat& r) const;

   private:
    const LogDetOracle* oracle_;
    Mat theta_;
    Counters* ct_;
    bool ok_ = false;
    double logdet_ = 0.0;
    Eigen::LLT<Mat> llt_;
    mutable Mat theta_inv_;
    mutable Vec grad_vec_;
  };

  Index p() const { return p_; }
  Index dim() const override { return p_ * p_; }
  bool has_hess_solve() const override { return true; }

  std::unique_ptr<OraclePoint> at(const Vec& x,
                                  Counters* ct = nullptr) const override;
  Point point(const Mat& theta, Counters* ct = nullptr) const;

  const Mat& sigma_hat() const { return sigma_hat_; }

 private:
  Mat sigma_hat_;
  Index p_;
};

}  // namespace scomp
