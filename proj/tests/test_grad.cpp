#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "scomp/apps/graph.hpp"
#include "scomp/omega.hpp"
#include "scomp/oracles/logdet.hpp"
#include "scomp/solver/grad.hpp"

using namespace scomp;
using namespace scomp::testing;

namespace {

// Quadratic oracle f(x) = 1/2 (x-c)' Q (x-c); trivially in F_2.
class QuadOracle final : public SmoothOracle {
 public:
  QuadOracle(Mat Q, Vec c) : Q_(std::move(Q)), c_(std::move(c)) {}

  class Point final : public OraclePoint {
   public:
    Point(const QuadOracle* o, Vec x) : o_(o), x_(std::move(x)) {}
    bool in_domain() const override { return x_.allFinite(); }
    double value() const override {
      const Vec d = x_ - o_->c_;
      return 0.5 * d.dot(o_->Q_ * d);
    }
    const Vec& gradient() const override {
      if (g_.size() == 0) g_ = o_->Q_ * (x_ - o_->c_);
      return g_;
    }
    void hess_vec(const Vec& v, Vec& out) const override {
      out.noalias() = o_->Q_ * v;
    }
    void hess_solve(const Vec& r, Vec& out) const override {
      out = o_->Q_.ldlt().solve(r);
    }

   private:
    const QuadOracle* o_;
    Vec x_;
    mutable Vec g_;
  };

  Index dim() const override { return c_.size(); }
  bool has_hess_solve() const override { return true; }
  std::unique_ptr<OraclePoint> at(const Vec& x,
                                  Counters* ct = nullptr) const override {
    (void)ct;
    return std::make_unique<Point>(this, x);
  }

 private:
  Mat Q_;
  Vec c_;
};

ProblemInstance quad_instance(double curvature, Index n, const Vec& c,
                              const Vec& x0, double rho = 0.0) {
  ProblemInstance inst;
  inst.oracle = std::make_shared<QuadOracle>(
      Mat(curvature * Mat::Identity(n, n)), c);
  inst.reg = rho > 0 ? std::shared_ptr<Regularizer>(new L1Reg(rho))
                     : std::shared_ptr<Regularizer>(new ZeroReg());
  inst.x0 = x0;
  return inst;
}

}  // namespace

TEST_CASE("grad_step_size formula and optimality") {
  // beta = lambda recovers the damped Newton step.
  CHECK(grad_step_size(0.4, 0.4) == doctest::Approx(1.0 / 1.4));
  CHECK(grad_step_size(1.0, 1.0) == doctest::Approx(0.5));

  const double lambda = 0.6, beta = std::sqrt(0.5);
  CHECK(lambda * lambda / (beta * beta) + lambda >= 1.0);
  const double alpha = grad_step_size(lambda, beta);
  CHECK(alpha == doctest::Approx(0.5 / (0.6 * 1.1)).epsilon(1e-12));
  // phi(a) = a beta^2 - omega*(a lambda) is maximized at alpha.
  auto phi = [&](double a) {
    return a * beta * beta - omega_star(a * lambda);
  };
  double best_a = 0, best = -kInf;
  for (int i = 1; i < 2000; ++i) {
    const double a = i / 2000.0 / lambda;  // keep a*lambda < 1
    if (phi(a) > best) {
      best = phi(a);
      best_a = a;
    }
  }
  CHECK(alpha == doctest::Approx(best_a).epsilon(1e-3));
  CHECK(phi(alpha) == doctest::Approx(omega(beta * beta / lambda))
                          .epsilon(1e-12));
  CHECK_THROWS_AS(grad_step_size(0.0, 1.0), Error);
}

TEST_CASE("choose_Lk halves from 8c to c on an isotropic quadratic") {
  const Index n = 6;
  const double c = 2.0;
  const Vec target = Vec::Ones(n);
  // Small gradient keeps lambda below the auto-accept threshold.
  const Vec x0 = target.array() + 1e-3;
  ProblemInstance inst = quad_instance(c, n, target, x0);
  GradConfig cfg;
  auto pt = inst.oracle->at(x0);
  const ChooseLkResult lk = choose_Lk(inst, *pt, x0, 8.0 * c, cfg);
  CHECK(lk.L == doctest::Approx(c));
  CHECK(lk.halvings == 3);
  CHECK(lk.dir.lambda == doctest::Approx(lk.dir.beta).epsilon(1e-9));
}

TEST_CASE("choose_Lk accepts immediately when lambda >= 1") {
  const Index n = 4;
  const double c = 2.0;
  const Vec target = Vec::Zero(n);
  const Vec x0 = Vec::Ones(n) * 10.0;  // far away: big direction
  ProblemInstance inst = quad_instance(c, n, target, x0);
  GradConfig cfg;
  auto pt = inst.oracle->at(x0);
  // L above the curvature, so lambda^2/beta^2 < 1; only lambda >= 1 accepts.
  const ChooseLkResult lk = choose_Lk(inst, *pt, x0, 2.0 * c, cfg);
  CHECK(lk.halvings == 0);
  CHECK(lk.dir.lambda >= 1.0);
  CHECK(lk.dir.lambda * lk.dir.lambda <
        lk.dir.beta * lk.dir.beta);
}

TEST_CASE("choose_Lk reports exhaustion with the final state") {
  const Index n = 3;
  ProblemInstance inst = quad_instance(4.0, n, Vec::Zero(n),
                                       Vec::Ones(n) * 1e-4);
  GradConfig cfg;
  cfg.max_halvings = 1;  // cannot reach L <= c from far above
  auto pt = inst.oracle->at(inst.x0);
  CHECK_THROWS_AS(choose_Lk(inst, *pt, inst.x0, 1024.0, cfg),
                  StepConditionFailure);
}

TEST_CASE("solve_grad terminates at a stationary start") {
  Rng rng(51);
  Mat sigma = random_spd(rng, 4, 1.0);
  const double rho = 1.1 * sigma.cwiseAbs().maxCoeff();
  GraphProblem gp = make_graph_problem(sigma, rho);
  ProblemInstance inst;
  inst.oracle = std::make_shared<LogDetOracle>(gp.sigma_hat);
  inst.reg = std::make_shared<L1Reg>(gp.rho);
  inst.x0 = Eigen::Map<const Vec>(gp.theta0.data(), gp.theta0.size());
  GradConfig cfg;
  cfg.eps = 1e-5;
  const GradResult res = solve_grad(inst, cfg);
  CHECK(res.trace.converged());
  CHECK(res.trace.records.size() <= 3);
}

TEST_CASE("solve_grad descends per Lemma 4 and stays feasible") {
  GraphProblem gp = synth_gmrf(6, 0.3, 0, 9, 0.05);
  ProblemInstance inst;
  inst.oracle = std::make_shared<LogDetOracle>(gp.sigma_hat);
  inst.reg = std::make_shared<L1Reg>(gp.rho);
  inst.x0 = Eigen::Map<const Vec>(gp.theta0.data(), gp.theta0.size());
  GradConfig cfg;
  cfg.eps = 1e-6;
  cfg.max_iter = 5000;
  const GradResult res = solve_grad(inst, cfg);
  REQUIRE(res.trace.converged());
  CHECK(!res.trace.anomaly_descent);
  const auto& rows = res.trace.records;
  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    CHECK(rows[k + 1].F <=
          rows[k].F -
              omega(rows[k].beta * rows[k].beta / rows[k].lambda) +
              1e-8 * (1.0 + std::fabs(rows[k].F)));
    CHECK(rows[k].alpha * rows[k].lambda < 1.0);  // Dikin feasibility
    // Re-checking the acceptance condition at the accepted pair passes.
    const double lam = rows[k].lambda, b2 = rows[k].beta * rows[k].beta;
    CHECK((lam >= 1.0 || lam * lam / b2 + lam >= 1.0 - 1e-9));
  }
}

TEST_CASE("greedy update picks the better feasible point") {
  const Index n = 3;
  ProblemInstance inst = quad_instance(1.0, n, Vec::Zero(n), Vec::Ones(n));
  SUBCASE("alpha = 1 returns s") {
    const Vec s = 0.5 * Vec::Ones(n);
    double Fn = 0;
    const Vec got = greedy_update(inst, inst.x0, s, 1.0, &Fn);
    CHECK((got - s).norm() == 0.0);
  }
  SUBCASE("quadratic always prefers the full trial point") {
    const Vec s = Vec::Zero(n);  // the exact minimizer
    double Fn = 0;
    const Vec got = greedy_update(inst, inst.x0, s, 0.25, &Fn);
    CHECK((got - s).norm() == 0.0);
    CHECK(Fn == doctest::Approx(0.0));
  }
}

TEST_CASE("greedy dominates per iteration on a strictly convex quadratic") {
  // F(s) < F(x_hat) at every step here, so the greedy branch always fires
  // and the trajectory reaches the minimizer immediately.
  const Index n = 5;
  ProblemInstance inst = quad_instance(2.0, n, Vec::Zero(n), Vec::Ones(n));
  GradConfig cfg;
  cfg.eps = 1e-12;
  cfg.L0 = 2.0;
  cfg.max_iter = 30;
  const GradResult plain = solve_grad(inst, cfg);
  cfg.greedy = true;
  const GradResult greedy = solve_grad(inst, cfg);
  const size_t n_rows = std::min(plain.trace.records.size(),
                                 greedy.trace.records.size());
  REQUIRE(n_rows >= 2);
  for (size_t k = 0; k < n_rows; ++k) {
    CHECK(greedy.trace.records[k].F <=
          plain.trace.records[k].F +
              1e-12 * (1.0 + std::fabs(plain.trace.records[k].F)));
  }
}

TEST_CASE("greedy matches or beats plain at an equal budget on graphs") {
  GraphProblem gp = synth_gmrf(6, 0.3, 0, 13, 0.05);
  ProblemInstance inst;
  inst.oracle = std::make_shared<LogDetOracle>(gp.sigma_hat);
  inst.reg = std::make_shared<L1Reg>(gp.rho);
  inst.x0 = Eigen::Map<const Vec>(gp.theta0.data(), gp.theta0.size());
  GradConfig cfg;
  cfg.eps = 1e-9;
  cfg.max_iter = 60;  // fixed budget, compare the final objective
  const GradResult plain = solve_grad(inst, cfg);
  cfg.greedy = true;
  const GradResult greedy = solve_grad(inst, cfg);
  const double fp = plain.trace.records.back().F;
  const double fg = greedy.trace.records.back().F;
  CHECK(fg <= fp + 1e-9 * (1.0 + std::fabs(fp)));
}

TEST_CASE("ergodic average accumulates alpha-weighted iterates") {
  GraphProblem gp = synth_gmrf(4, 0.3, 0, 21, 0.05);
  ProblemInstance inst;
  inst.oracle = std::make_shared<LogDetOracle>(gp.sigma_hat);
  inst.reg = std::make_shared<L1Reg>(gp.rho);
  inst.x0 = Eigen::Map<const Vec>(gp.theta0.data(), gp.theta0.size());
  GradConfig cfg;
  cfg.eps = 1e-7;
  cfg.keep_iterates = true;
  cfg.max_iter = 3000;
  const GradResult res = solve_grad(inst, cfg);
  REQUIRE(res.trace.converged());
  REQUIRE(res.iterates.size() == res.alphas.size());
  Vec acc = Vec::Zero(inst.x0.size());
  double S = 0;
  for (size_t j = 0; j < res.iterates.size(); ++j) {
    acc += res.alphas[j] * res.iterates[j];
    S += res.alphas[j];
  }
  CHECK(S == doctest::Approx(res.S));
  CHECK((acc / S - res.ergodic_x).norm() <= 1e-12 * (1.0 + res.ergodic_x.norm()));
}

TEST_CASE("local linear diagnostic limiting cases") {
  const Index n = 4;
  const double c = 3.0;
  const Vec target = Vec::Zero(n);
  ProblemInstance inst = quad_instance(c, n, target, Vec::Ones(n), 0.0);
  GradConfig cfg;
  cfg.eps = 1e-10;
  cfg.keep_iterates = true;
  cfg.bb_init = false;
  cfg.L0 = c;  // D_k = Hessian exactly
  GradResult run = solve_grad(inst, cfg);
  REQUIRE(run.trace.converged());
  const LinearDiagnosticReport rep =
      local_linear_diagnostic(run, *inst.oracle, target);
  for (const double c_res : rep.c_res) CHECK(c_res <= 1e-10);
  // gamma* = max(|1 - L/sig_min|, |1 - L/sig_max|) = 0 for isotropic Q.
  for (const double r : rep.contraction) CHECK(r <= 1.0 + 1e-9);
}

TEST_CASE("BB initialization uses the gradient-difference quotient") {
  // On a quadratic, BB reproduces the curvature and no halving is needed
  // after the first iteration.
  const Index n = 5;
  const double c = 1.7;
  ProblemInstance inst = quad_instance(c, n, Vec::Zero(n),
                                       Vec::Ones(n) * 0.05);
  GradConfig cfg;
  cfg.eps = 1e-12;
  cfg.L0 = 10.0 * c;
  cfg.max_iter = 50;
  const GradResult res = solve_grad(inst, cfg);
  REQUIRE(res.trace.records.size() >= 3);
  for (size_t k = 1; k + 1 < res.trace.records.size(); ++k) {
    CHECK(res.trace.records[k].L == doctest::Approx(c).epsilon(1e-9));
  }
}
