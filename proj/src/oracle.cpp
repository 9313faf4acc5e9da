#include "scomp/oracle.hpp"

#include <cmath>

namespace scomp {

void OraclePoint::hess_solve(const Vec&, Vec&) const {
  throw Error("oracle does not provide a Hessian solve");
}

double local_norm(const OraclePoint& pt, const Vec& v) {
  if (!pt.in_domain()) throw DomainError("local_norm: point outside dom f");
  const double q = v.dot(pt.hess_vec(v));
  if (q < 0) {
    if (q < -1e-12 * v.squaredNorm()) {
      throw OracleConsistencyError("local_norm: negative quadratic form " +
                                   std::to_string(q));
    }
    return 0.0;
  }
  return std::sqrt(q);
}

double dual_local_norm(const OraclePoint& pt, const Vec& r) {
  if (!pt.in_domain()) {
    throw DomainError("dual_local_norm: point outside dom f");
  }
  const double q = r.dot(pt.hess_solve(r));
  if (q < 0) {
    if (q < -1e-12 * r.squaredNorm()) {
      throw OracleConsistencyError(
          "dual_local_norm: negative quadratic form " + std::to_string(q));
    }
    return 0.0;
  }
  return std::sqrt(q);
}

namespace {

class ScaledPoint final : public OraclePoint {
 public:
  ScaledPoint(std::unique_ptr<OraclePoint> base, double factor)
      : base_(std::move(base)), factor_(factor) {}

  bool in_domain() const override { return base_->in_domain(); }
  double value() const override { return factor_ * base_->value(); }
  const Vec& gradient() const override {
    if (grad_.size() == 0) grad_ = factor_ * base_->gradient();
    return grad_;
  }
  void hess_vec(const Vec& v, Vec& out) const override {
    base_->hess_vec(v, out);
    out *= factor_;
  }
  void hess_solve(const Vec& r, Vec& out) const override {
    base_->hess_solve(r, out);
    out /= factor_;
  }

 private:
  std::unique_ptr<OraclePoint> base_;
  double factor_;
  mutable Vec grad_;
};

class ScaledOracle final : public SmoothOracle {
 public:
  ScaledOracle(std::shared_ptr<const SmoothOracle> base, double factor)
      : base_(std::move(base)), factor_(factor) {}

  Index dim() const override { return base_->dim(); }
  bool has_hess_solve() const override { return base_->has_hess_solve(); }
  std::unique_ptr<OraclePoint> at(const Vec& x, Counters* ct) const override {
    return std::make_unique<ScaledPoint>(base_->at(x, ct), factor_);
  }

 private:
  std::shared_ptr<const SmoothOracle> base_;
  double factor_;
};

}  // namespace

std::shared_ptr<const SmoothOracle> standardize(
    std::shared_ptr<const SmoothOracle> oracle, double M) {
  if (!(M > 0)) throw DomainError("standardize: M must be > 0");
  const double factor = M * M / 4.0;
  if (factor == 1.0) return oracle;
  return std::make_shared<ScaledOracle>(std::move(oracle), factor);
}

}  // namespace scomp
