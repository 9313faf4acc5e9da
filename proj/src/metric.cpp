#include "scomp/subsolver/metric.hpp"

#include <cmath>

namespace scomp {

double power_method_max_eig(
    const std::function<void(const Vec&, Vec&)>& apply_op, Index n,
    int iters) {
  if (n <= 0) throw DomainError("power_method_max_eig: empty operator");
  Vec v = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  Vec w(n);
  double mu = 0.0;
  for (int i = 0; i < iters; ++i) {
    apply_op(v, w);
    mu = v.dot(w);
    const double nw = w.norm();
    if (!(nw > 0)) return 0.0;
    v = w / nw;
  }
  return std::max(mu, 0.0);
}

MetricOperator hessian_metric(const OraclePoint& pt, Index n, double max_eig,
                              int power_iters) {
  MetricOperator op;
  op.apply = [&pt](const Vec& v, Vec& out) { pt.hess_vec(v, out); };
  op.solve = [&pt](const Vec& r, Vec& out) { pt.hess_solve(r, out); };
  op.largest_eig_estimate =
      max_eig > 0 ? max_eig : power_method_max_eig(op.apply, n, power_iters);
  return op;
}

}  // namespace scomp
