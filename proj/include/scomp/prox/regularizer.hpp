#pragma once

#include <memory>
#include <vector>

#include "scomp/types.hpp"

namespace scomp {

// Per-solve scratch owned by the caller; regularizers with iterative prox
// (TV) keep their warm-start state here so the Regularizer itself stays
// immutable and shareable.
class ProxWorkspace {
 public:
  virtual ~ProxWorkspace() = default;
};

// Nonsmooth part g with its proximal map in the metric form
//   prox_diag(u, d) = argmin_x { g(x) + 1/2 x' diag(d) x - u' x },
// i.e. the paper-facing convention every fixed-point formula uses; the
// conventional prox of g/d at u/d is the same thing.
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual double eval(const Vec& x) const = 0;  // may be +inf (indicator)
  virtual void prox_diag(const Vec& u, const Vec& d, Vec& out,
                         ProxWorkspace* ws = nullptr,
                         Counters* ct = nullptr) const = 0;
  virtual bool separable() const = 0;
  virtual std::unique_ptr<ProxWorkspace> make_workspace() const {
    return nullptr;
  }

  Vec prox_diag(const Vec& u, const Vec& d, ProxWorkspace* ws = nullptr,
                Counters* ct = nullptr) const {
    Vec out(u.size());
    prox_diag(u, d, out, ws, ct);
    return out;
  }
};

// g(x) = rho * sum_{i unmasked} |x_i|. Masked coordinates (unpenalized[i]
// true) contribute nothing and pass through every prox unchanged; het-LASSO
// uses this to leave sigma free.
class L1Reg final : public Regularizer {
 public:
  explicit L1Reg(double rho) : rho_(rho) {
    if (rho_ < 0) throw DomainError("L1Reg: rho must be >= 0");
  }
  L1Reg(double rho, std::vector<bool> unpenalized)
      : rho_(rho), unpenalized_(std::move(unpenalized)) {
    if (rho_ < 0) throw DomainError("L1Reg: rho must be >= 0");
  }

  using Regularizer::prox_diag;
  double eval(const Vec& x) const override;
  void prox_diag(const Vec& u, const Vec& d, Vec& out, ProxWorkspace* ws,
                 Counters* ct) const override;
  bool separable() const override { return true; }

  double rho() const { return rho_; }

 private:
  double rho_;
  std::vector<bool> unpenalized_;  // empty means all penalized
};

// g = 0; the prox collapses to the metric solve diag(d)^-1 u.
class ZeroReg final : public Regularizer {
 public:
  using Regularizer::prox_diag;
  double eval(const Vec&) const override { return 0.0; }
  void prox_diag(const Vec& u, const Vec& d, Vec& out, ProxWorkspace*,
                 Counters* ct) const override {
    if ((d.array() <= 0).any()) {
      throw DomainError("ZeroReg::prox_diag: weights must be positive");
    }
    out = u.cwiseQuotient(d);
    if (ct) ++ct->prox;
  }
  bool separable() const override { return true; }
};

// Componentwise prox at a gradient-step point: out_i = soft(u_i, rho*tau_i),
// with masked coordinates passed through. tau must be positive elementwise.
Vec prox_l1(const Vec& u, const Vec& tau, double rho,
            const std::vector<bool>& unpenalized = {});

}  // namespace scomp
