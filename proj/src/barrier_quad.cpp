#include "scomp/oracles/barrier_quad.hpp"

#include <cmath>

namespace scomp {

BarrierQuadOracle::BarrierQuadOracle(Mat A, Vec y, double sigma2, double t)
    : A_(std::move(A)), y_(std::move(y)), sigma2_(sigma2), t_(t) {
  if (A_.rows() != y_.size()) {
    throw DomainError("BarrierQuadOracle: A rows and y size mismatch");
  }
  if (!(sigma2_ > 0)) throw DomainError("BarrierQuadOracle: sigma2 must be > 0");
  if (!(t_ > 0)) throw DomainError("BarrierQuadOracle: t must be > 0");
  ata_ = A_.transpose() * A_;
}

BarrierQuadOracle::Point::Point(const BarrierQuadOracle* oracle, Vec x,
                                Counters* ct)
    : oracle_(oracle), x_(std::move(x)), ct_(ct) {
  if (!x_.allFinite()) return;
  resid_ = oracle_->A_ * x_ - oracle_->y_;
  slack_ = oracle_->sigma2_ - resid_.squaredNorm();
  ok_ = slack_ > 0;
}

double BarrierQuadOracle::Point::value() const {
  if (!ok_) return kInf;
  return -oracle_->t_ * std::log(slack_);
}

const Vec& BarrierQuadOracle::Point::gradient() const {
  if (!ok_) throw DomainError("BarrierQuadOracle: gradient outside dom f");
  if (grad_.size() == 0) {
    atr_ = oracle_->A_.transpose() * resid_;
    grad_ = (2.0 * oracle_->t_ / slack_) * atr_;
  }
  return grad_;
}

void BarrierQuadOracle::Point::hess_vec(const Vec& v, Vec& out) const {
  if (!ok_) throw DomainError("BarrierQuadOracle: hess_vec outside dom f");
  gradient();  // ensure atr_
  const double t = oracle_->t_;
  out = (2.0 * t / slack_) * (oracle_->ata_ * v) +
        (4.0 * t / (slack_ * slack_)) * atr_ * atr_.dot(v);
}

void BarrierQuadOracle::Point::hess_solve(const Vec& r, Vec& out) const {
  if (!ok_) throw DomainError("BarrierQuadOracle: hess_solve outside dom f");
  if (!ldlt_ready_) {
    gradient();
    const double t = oracle_->t_;
    Mat H = (2.0 * t / slack_) * oracle_->ata_ +
            (4.0 * t / (slack_ * slack_)) * (atr_ * atr_.transpose());
    ldlt_.compute(H);
    if (ct_) ++ct_->chol;
    ldlt_ready_ = true;
  }
  const Vec d = ldlt_.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 1e-14 * std::max(dmax, 1.0))) {
      throw RankDeficiencyError("BarrierQuadOracle: singular Hessian system",
                                i);
    }
  }
  out = ldlt_.solve(r);
}

std::unique_ptr<OraclePoint> BarrierQuadOracle::at(const Vec& x,
                                                   Counters* ct) const {
  if (x.size() != A_.cols()) {
    throw DomainError("BarrierQuadOracle: dimension mismatch");
  }
  return std::make_unique<Point>(this, x, ct);
}

}  // namespace scomp
