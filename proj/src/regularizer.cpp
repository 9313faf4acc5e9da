#include "scomp/prox/regularizer.hpp"

#include <cmath>

#include "scomp/kernels.hpp"

namespace scomp {

double L1Reg::eval(const Vec& x) const {
  if (unpenalized_.empty()) return rho_ * x.lpNorm<1>();
  if (unpenalized_.size() != static_cast<size_t>(x.size())) {
    throw DomainError("L1Reg: mask length mismatch");
  }
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (!unpenalized_[static_cast<size_t>(i)]) s += std::fabs(x(i));
  }
  return rho_ * s;
}

void L1Reg::prox_diag(const Vec& u, const Vec& d, Vec& out, ProxWorkspace*,
                      Counters* ct) const {
  if ((d.array() <= 0).any()) {
    throw DomainError("L1Reg::prox_diag: weights must be positive");
  }
  out.resize(u.size());
  kernels::active().soft_threshold(u.size(), u.data(), rho_, out.data());
  out.array() /= d.array();
  if (!unpenalized_.empty()) {
    if (unpenalized_.size() != static_cast<size_t>(u.size())) {
      throw DomainError("L1Reg: mask length mismatch");
    }
    for (Index i = 0; i < u.size(); ++i) {
      if (unpenalized_[static_cast<size_t>(i)]) out(i) = u(i) / d(i);
    }
  }
  if (ct) ++ct->prox;
}

Vec prox_l1(const Vec& u, const Vec& tau, double rho,
            const std::vector<bool>& unpenalized) {
  if (tau.size() != u.size()) throw DomainError("prox_l1: size mismatch");
  if ((tau.array() <= 0).any()) {
    throw DomainError("prox_l1: tau must be positive elementwise");
  }
  Vec thresh = rho * tau;
  Vec out(u.size());
  kernels::active().soft_threshold_vt(u.size(), u.data(), thresh.data(),
                                      out.data());
  if (!unpenalized.empty()) {
    for (Index i = 0; i < u.size(); ++i) {
      if (unpenalized[static_cast<size_t>(i)]) out(i) = u(i);
    }
  }
  return out;
}

}  // namespace scomp
