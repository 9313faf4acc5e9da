#pragma once

#include <Eigen/Cholesky>

#include <memory>
#include <vector>

#include "scomp/oracle.hpp"

namespace scomp {

// Standardized Poisson log-likelihood smooth part:
//   f(x) = (M^2/4) * sum_i [ a_i'x - y_i log(a_i'x) ],
// with M = 2 max{ 1/sqrt(y_i) : y_i > 0 }. Rows with y_i = 0 keep their
// linear term only and do not restrict the domain; rows with y_i > 0 require
// a_i'x > 0.
class PoissonOracle final : public SmoothOracle {
 public:
  PoissonOracle(SpMat A, Vec y);

  class Point final : public OraclePoint {
   public:
    Point(const PoissonOracle* oracle, Vec x, Counters* ct);

    bool in_domain() const override { return ok_; }
    double value() const override;
    const Vec& gradient() const override;
    void hess_vec(const Vec& v, Vec& out) const override;
    void hess_solve(const Vec& r, Vec& out) const override;

    // (M/2) * sqrt( sum_{y_i>0} y_i (a_i'd)^2 / (a_i'x)^2 ), one mat-vec.
    double decrement(const Vec& d) const;

   private:
    const PoissonOracle* oracle_;
    Vec x_;
    Counters* ct_;
    bool ok_ = false;
    Vec t_;          // A x
    Vec t_pos_;      // rows with y_i > 0, packed
    mutable Vec grad_;
    mutable Eigen::LDLT<Mat> ldlt_;
    mutable bool ldlt_ready_ = false;
  };

  Index dim() const override { return A_.cols(); }
  bool has_hess_solve() const override { return true; }
  std::unique_ptr<OraclePoint> at(const Vec& x,
                                  Counters* ct = nullptr) const override;

  double M() const { return M_; }
  double scale() const { return factor_; }
  const SpMat& A() const { return A_; }
  const Vec& y() const { return y_; }

 private:
  friend class Point;
  SpMat A_;
  Vec y_;
  double M_ = 2.0;
  double factor_ = 1.0;                 // M^2 / 4
  std::vector<Index> pos_rows_;         // indices with y_i > 0
  Vec y_pos_;                           // y restricted to pos_rows_
};

}  // namespace scomp
