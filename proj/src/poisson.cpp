#include "scomp/oracles/poisson.hpp"

#include <cmath>

#include "scomp/kernels.hpp"

namespace scomp {

PoissonOracle::PoissonOracle(SpMat A, Vec y)
    : A_(std::move(A)), y_(std::move(y)) {
  if (A_.rows() != y_.size()) {
    throw DomainError("PoissonOracle: A rows and y size mismatch");
  }
  if ((y_.array() < 0).any()) {
    throw DomainError("PoissonOracle: counts must be nonnegative");
  }
  double max_inv_sqrt = 0.0;
  for (Index i = 0; i < y_.size(); ++i) {
    if (y_(i) > 0) {
      pos_rows_.push_back(i);
      max_inv_sqrt = std::max(max_inv_sqrt, 1.0 / std::sqrt(y_(i)));
    }
  }
  // All-zero counts leave f linear (still standard self-concordant); keep
  // the conventional M = 2 so the scale factor is 1.
  M_ = pos_rows_.empty() ? 2.0 : 2.0 * max_inv_sqrt;
  factor_ = M_ * M_ / 4.0;
  y_pos_.resize(static_cast<Index>(pos_rows_.size()));
  for (size_t k = 0; k < pos_rows_.size(); ++k) {
    y_pos_(static_cast<Index>(k)) = y_(pos_rows_[k]);
  }
}

PoissonOracle::Point::Point(const PoissonOracle* oracle, Vec x, Counters* ct)
    : oracle_(oracle), x_(std::move(x)), ct_(ct) {
  if (!x_.allFinite()) return;
  t_ = oracle_->A_ * x_;
  if (!t_.allFinite()) return;
  const auto& pos = oracle_->pos_rows_;
  t_pos_.resize(static_cast<Index>(pos.size()));
  for (size_t k = 0; k < pos.size(); ++k) {
    const double ti = t_(pos[k]);
    if (!(ti > 0)) return;
    t_pos_(static_cast<Index>(k)) = ti;
  }
  ok_ = true;
}

double PoissonOracle::Point::value() const {
  if (!ok_) return kInf;
  double v = t_.sum();
  for (Index k = 0; k < t_pos_.size(); ++k) {
    v -= oracle_->y_pos_(k) * std::log(t_pos_(k));
  }
  return oracle_->factor_ * v;
}

const Vec& PoissonOracle::Point::gradient() const {
  if (!ok_) throw DomainError("PoissonOracle: gradient outside dom f");
  if (grad_.size() == 0) {
    Vec coef = Vec::Ones(t_.size());
    const auto& pos = oracle_->pos_rows_;
    for (size_t k = 0; k < pos.size(); ++k) {
      coef(pos[k]) = 1.0 - oracle_->y_pos_(static_cast<Index>(k)) /
                               t_pos_(static_cast<Index>(k));
    }
    grad_ = oracle_->factor_ * (oracle_->A_.transpose() * coef);
  }
  return grad_;
}

void PoissonOracle::Point::hess_vec(const Vec& v, Vec& out) const {
  if (!ok_) throw DomainError("PoissonOracle: hess_vec outside dom f");
  Vec u = oracle_->A_ * v;
  const auto& pos = oracle_->pos_rows_;
  Vec w = Vec::Zero(u.size());
  for (size_t k = 0; k < pos.size(); ++k) {
    const double ti = t_pos_(static_cast<Index>(k));
    w(pos[k]) = oracle_->y_pos_(static_cast<Index>(k)) * u(pos[k]) / (ti * ti);
  }
  out = oracle_->factor_ * (oracle_->A_.transpose() * w);
}

double PoissonOracle::Point::decrement(const Vec& d) const {
  if (!ok_) throw DomainError("PoissonOracle: decrement outside dom f");
  const Vec u = oracle_->A_ * d;
  const auto& pos = oracle_->pos_rows_;
  Vec u_pos(static_cast<Index>(pos.size()));
  for (size_t k = 0; k < pos.size(); ++k) {
    u_pos(static_cast<Index>(k)) = u(pos[k]);
  }
  const double q = kernels::active().weighted_ratio_sumsq(
      u_pos.size(), oracle_->y_pos_.data(), u_pos.data(), t_pos_.data());
  return 0.5 * oracle_->M_ * std::sqrt(std::max(q, 0.0));
}

void PoissonOracle::Point::hess_solve(const Vec& r, Vec& out) const {
  if (!ok_) throw DomainError("PoissonOracle: hess_solve outside dom f");
  if (!ldlt_ready_) {
    // Dense assembly; meant for modest n (tests, diagnostics).
    const Index n = oracle_->A_.cols();
    Mat H = Mat::Zero(n, n);
    const auto& pos = oracle_->pos_rows_;
    for (size_t k = 0; k < pos.size(); ++k) {
      const Index i = pos[k];
      const double ti = t_pos_(static_cast<Index>(k));
      const double wi = oracle_->y_pos_(static_cast<Index>(k)) / (ti * ti);
      Vec ai = Vec::Zero(n);
      for (SpMat::InnerIterator it(oracle_->A_, i); it; ++it) {
        ai(it.col()) = it.value();
      }
      H.selfadjointView<Eigen::Lower>().rankUpdate(ai, wi);
    }
    H = oracle_->factor_ * Mat(H.selfadjointView<Eigen::Lower>());
    ldlt_.compute(H);
    if (ct_) ++ct_->chol;
    ldlt_ready_ = true;
  }
  const Vec d = ldlt_.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 1e-14 * std::max(dmax, 1.0))) {
      throw RankDeficiencyError("PoissonOracle: singular Hessian system", i);
    }
  }
  out = ldlt_.solve(r);
}

std::unique_ptr<OraclePoint> PoissonOracle::at(const Vec& x,
                                               Counters* ct) const {
  if (x.size() != A_.cols()) {
    throw DomainError("PoissonOracle: dimension mismatch");
  }
  return std::make_unique<Point>(this, x, ct);
}

}  // namespace scomp
