#include "scomp/oracles/hetlasso.hpp"

#include <cmath>

namespace scomp {

HetLassoOracle::HetLassoOracle(Mat X, Vec y)
    : X_(std::move(X)), y_(std::move(y)) {
  if (X_.rows() != y_.size()) {
    throw DomainError("HetLassoOracle: X rows and y size mismatch");
  }
  if (X_.rows() == 0) throw DomainError("HetLassoOracle: empty data");
  xty_ = X_.transpose() * y_;
  yty_ = y_.squaredNorm();
  xtx_ = X_.transpose() * X_;
}

HetLassoOracle::Point::Point(const HetLassoOracle* oracle, Vec x, Counters* ct)
    : oracle_(oracle), x_(std::move(x)), ct_(ct) {
  if (!x_.allFinite()) return;
  const double sigma = x_(x_.size() - 1);
  if (!(sigma > 0)) return;
  z_ = oracle_->X_ * x_.head(x_.size() - 1) - sigma * oracle_->y_;
  ok_ = true;
}

double HetLassoOracle::Point::value() const {
  if (!ok_) return kInf;
  const double n = static_cast<double>(oracle_->X_.rows());
  return -std::log(x_(x_.size() - 1)) + z_.squaredNorm() / (2.0 * n);
}

const Vec& HetLassoOracle::Point::gradient() const {
  if (!ok_) throw DomainError("HetLassoOracle: gradient outside dom f");
  if (grad_.size() == 0) {
    const double n = static_cast<double>(oracle_->X_.rows());
    const double sigma = x_(x_.size() - 1);
    grad_.resize(x_.size());
    grad_.head(x_.size() - 1) = (oracle_->X_.transpose() * z_) / n;
    grad_(x_.size() - 1) = -1.0 / sigma - oracle_->y_.dot(z_) / n;
  }
  return grad_;
}

void HetLassoOracle::Point::hess_vec(const Vec& v, Vec& out) const {
  if (!ok_) throw DomainError("HetLassoOracle: hess_vec outside dom f");
  const Index p = x_.size() - 1;
  const double n = static_cast<double>(oracle_->X_.rows());
  const double sigma = x_(p);
  const double vs = v(p);
  const Vec u = oracle_->X_ * v.head(p);
  out.resize(v.size());
  out.head(p) = (oracle_->X_.transpose() * u) / n - (vs / n) * oracle_->xty_;
  out(p) = -oracle_->xty_.dot(v.head(p)) / n +
           (1.0 / (sigma * sigma) + oracle_->yty_ / n) * vs;
}

void HetLassoOracle::Point::hess_solve(const Vec& r, Vec& out) const {
  if (!ok_) throw DomainError("HetLassoOracle: hess_solve outside dom f");
  if (!ldlt_ready_) {
    const Index p = x_.size() - 1;
    const double n = static_cast<double>(oracle_->X_.rows());
    const double sigma = x_(p);
    Mat H(p + 1, p + 1);
    H.topLeftCorner(p, p) = oracle_->xtx_ / n;
    H.topRightCorner(p, 1) = -oracle_->xty_ / n;
    H.bottomLeftCorner(1, p) = (-oracle_->xty_ / n).transpose();
    H(p, p) = 1.0 / (sigma * sigma) + oracle_->yty_ / n;
    ldlt_.compute(H);
    if (ct_) ++ct_->chol;
    ldlt_ready_ = true;
  }
  const Vec d = ldlt_.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 1e-14 * std::max(dmax, 1.0))) {
      throw RankDeficiencyError("HetLassoOracle: singular Hessian system", i);
    }
  }
  out = ldlt_.solve(r);
}

double HetLassoOracle::decrement(double sigma, const Vec& d) const {
  if (!(sigma > 0)) throw DomainError("HetLassoOracle: sigma must be > 0");
  const Index p = X_.cols();
  const double n = static_cast<double>(X_.rows());
  const double ds = d(p);
  const Vec z = X_ * d.head(p);
  const double q = (1.0 / (sigma * sigma) + yty_ / n) * ds * ds +
                   z.squaredNorm() / n - 2.0 * ds * y_.dot(z) / n;
  return std::sqrt(std::max(q, 0.0));
}

std::unique_ptr<OraclePoint> HetLassoOracle::at(const Vec& x,
                                                Counters* ct) const {
  if (x.size() != dim()) throw DomainError("HetLassoOracle: dim mismatch");
  return std::make_unique<Point>(this, x, ct);
}

}  // namespace scomp
