#include "scomp/oracles/logdet.hpp"

#include <cmath>

namespace scomp {

LogDetOracle::LogDetOracle(Mat sigma_hat) : sigma_hat_(std::move(sigma_hat)) {
  if (sigma_hat_.rows() != sigma_hat_.cols()) {
    throw DomainError("LogDetOracle: sigma_hat must be square");
  }
  p_ = sigma_hat_.rows();
  sigma_hat_ = 0.5 * (sigma_hat_ + sigma_hat_.transpose()).eval();
}

LogDetOracle::Point::Point(const LogDetOracle* oracle, Mat theta, Counters* ct)
    : oracle_(oracle), theta_(std::move(theta)), ct_(ct) {
  if (!theta_.allFinite()) return;
  if (ct_) ++ct_->chol;
  llt_.compute(0.5 * (theta_ + theta_.transpose()));
  if (llt_.info() != Eigen::Success) return;
  const auto& L = llt_.matrixLLT();
  double ld = 0.0;
  for (Index i = 0; i < theta_.rows(); ++i) {
    const double di = L(i, i);
    if (!(di > 0) || !std::isfinite(di)) return;
    ld += std::log(di);
  }
  logdet_ = 2.0 * ld;
  ok_ = true;
}

double LogDetOracle::Point::value() const {
  if (!ok_) return kInf;
  return -logdet_ + oracle_->sigma_hat().cwiseProduct(theta_).sum();
}

double LogDetOracle::Point::logdet() const {
  if (!ok_) throw DomainError("LogDetOracle: logdet outside dom f");
  return logdet_;
}

const Mat& LogDetOracle::Point::theta_inv() const {
  if (!ok_) throw DomainError("LogDetOracle: point outside dom f");
  if (theta_inv_.size() == 0) {
    theta_inv_ = llt_.solve(Mat::Identity(theta_.rows(), theta_.cols()));
    theta_inv_ = 0.5 * (theta_inv_ + theta_inv_.transpose()).eval();
  }
  return theta_inv_;
}

Mat LogDetOracle::Point::gradient_mat() const {
  return oracle_->sigma_hat() - theta_inv();
}

const Vec& LogDetOracle::Point::gradient() const {
  if (grad_vec_.size() == 0) {
    const Mat g = gradient_mat();
    grad_vec_ = Eigen::Map<const Vec>(g.data(), g.size());
  }
  return grad_vec_;
}

Mat LogDetOracle::Point::hess_vec_mat(const Mat& v) const {
  const Mat& inv = theta_inv();
  if (ct_) ct_->matmul += 2;
  return inv * v * inv;
}

Mat LogDetOracle::Point::hess_solve_mat(const Mat& r) const {
  if (!ok_) throw DomainError("LogDetOracle: point outside dom f");
  if (ct_) ct_->matmul += 2;
  return theta_ * r * theta_;
}

void LogDetOracle::Point::hess_vec(const Vec& v, Vec& out) const {
  const Index p = theta_.rows();
  Eigen::Map<const Mat> vm(v.data(), p, p);
  const Mat res = hess_vec_mat(vm);
  out = Eigen::Map<const Vec>(res.data(), res.size());
}

void LogDetOracle::Point::hess_solve(const Vec& r, Vec& out) const {
  const Index p = theta_.rows();
  Eigen::Map<const Mat> rm(r.data(), p, p);
  const Mat res = hess_solve_mat(rm);
  out = Eigen::Map<const Vec>(res.data(), res.size());
}

std::unique_ptr<OraclePoint> LogDetOracle::at(const Vec& x,
                                              Counters* ct) const {
  if (x.size() != p_ * p_) {
    throw DomainError("LogDetOracle: expected vec of length p^2");
  }
  Eigen::Map<const Mat> theta(x.data(), p_, p_);
  return std::make_unique<Point>(this, Mat(theta), ct);
}

LogDetOracle::Point LogDetOracle::point(const Mat& theta, Counters* ct) const {
  if (theta.rows() != p_ || theta.cols() != p_) {
    throw DomainError("LogDetOracle: theta dimension mismatch");
  }
  return Point(this, theta, ct);
}

}  // namespace scomp
