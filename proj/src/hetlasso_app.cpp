#include "scomp/apps/hetlasso.hpp"

#include <cmath>

#include "scomp/oracles/hetlasso.hpp"
#include "scomp/rng.hpp"

namespace scomp {

HetLassoProblem make_hetlasso_problem(Mat X, Vec y, double rho) {
  if (X.rows() != y.size()) {
    throw DomainError("HetLassoProblem: X rows and y size mismatch");
  }
  if (!(rho >= 0)) throw DomainError("HetLassoProblem: rho must be >= 0");
  HetLassoProblem prob;
  const Index n = X.rows();
  const Index p = X.cols();
  prob.X = std::move(X);
  prob.y = std::move(y);
  prob.rho = rho;
  prob.x0 = Vec::Zero(p + 1);
  const double mean = prob.y.mean();
  const double var =
      (prob.y.array() - mean).square().sum() / static_cast<double>(n);
  prob.x0(p) = var > 0 ? std::sqrt(var) : 1.0;
  return prob;
}

HetLassoProblem synth_hetlasso(Index n, Index p, Index nnz, double noise,
                               std::uint64_t seed, double rho) {
  if (n < 1 || p < 1) throw DomainError("synth_hetlasso: bad dimensions");
  if (nnz < 0 || nnz > p) throw DomainError("synth_hetlasso: bad nnz");
  Rng rng(seed);
  Mat X(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
  }
  Vec beta = Vec::Zero(p);
  for (Index k = 0; k < nnz; ++k) {
    const Index j = rng.uniform_int(0, p - 1);
    beta(j) = rng.uniform() < 0.5 ? 1.0 : -1.0;
  }
  Vec y = X * beta + noise * rng.normal_vec(n);
  return make_hetlasso_problem(std::move(X), std::move(y), rho);
}

HetLassoSolveResult hetlasso_solve(const HetLassoProblem& prob,
                                   GradConfig cfg) {
  const Index p = prob.X.cols();
  if (prob.x0.size() != p + 1 || !(prob.x0(p) > 0)) {
    throw DomainError("hetlasso_solve: x0 must be (beta0, sigma0>0)");
  }
  auto oracle = std::make_shared<HetLassoOracle>(prob.X, prob.y);
  std::vector<bool> mask(static_cast<size_t>(p + 1), false);
  mask[static_cast<size_t>(p)] = true;  // sigma unpenalized
  auto reg = std::make_shared<L1Reg>(prob.rho, std::move(mask));

  ProblemInstance inst;
  inst.oracle = oracle;
  inst.reg = reg;
  inst.x0 = prob.x0;
  auto raw_oracle = oracle.get();
  inst.decrement = [raw_oracle](const OraclePoint& pt, const Vec& d) {
    const auto& hp = dynamic_cast<const HetLassoOracle::Point&>(pt);
    return raw_oracle->decrement(hp.sigma(), d);
  };

  GradResult run = solve_grad(inst, cfg);
  HetLassoSolveResult res;
  res.beta = run.x.head(p);
  res.sigma = run.x(p);
  res.trace = run.trace;
  res.trace.method = cfg.greedy ? "hetlasso/greedy" : "hetlasso";
  res.raw = std::move(run);
  return res;
}

}  // namespace scomp
