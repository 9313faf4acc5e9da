#pragma once

#include <functional>

#include "scomp/oracle.hpp"

namespace scomp {

// Symmetric PSD metric H_k for the subproblem. `solve` may be empty.
struct MetricOperator {
  std::function<void(const Vec&, Vec&)> apply;
  std::function<void(const Vec&, Vec&)> solve;
  Vec diag_hint;                      // size 0 when none
  double largest_eig_estimate = 0.0;  // cached, > 0 before use by FISTA

  Vec apply_vec(const Vec& v) const {
    Vec out(v.size());
    apply(v, out);
    return out;
  }
};

// Rayleigh-quotient estimate of the largest eigenvalue of a symmetric PSD
// operator; a lower bound, so users inflate it before treating it as a
// Lipschitz constant. Zero operators return 0.
double power_method_max_eig(
    const std::function<void(const Vec&, Vec&)>& apply_op, Index n,
    int iters = 10);

// Metric backed by the oracle Hessian at one point (proximal-Newton H_k).
// The point must outlive the returned operator. If max_eig <= 0 it is
// estimated by the power method.
MetricOperator hessian_metric(const OraclePoint& pt, Index n,
                              double max_eig = 0.0, int power_iters = 30);

}  // namespace scomp
