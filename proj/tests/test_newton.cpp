#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "helpers.hpp"
#include "scomp/apps/graph.hpp"
#include "scomp/omega.hpp"
#include "scomp/oracles/logdet.hpp"
#include "scomp/solver/newton.hpp"

using namespace scomp;
using namespace scomp::testing;

namespace {

ProblemInstance logdet_instance(const GraphProblem& gp) {
  ProblemInstance inst;
  inst.oracle = std::make_shared<LogDetOracle>(gp.sigma_hat);
  inst.reg = std::make_shared<L1Reg>(gp.rho);
  inst.x0 = Eigen::Map<const Vec>(gp.theta0.data(), gp.theta0.size());
  return inst;
}

}  // namespace

TEST_CASE("analytic damped step") {
  CHECK(analytic_damped_step(0.0) == 1.0);
  CHECK(analytic_damped_step(0.2) == doctest::Approx(1.0 / 1.2));
  CHECK(analytic_damped_step(4.0) == doctest::Approx(0.2));
  CHECK(omega(4.0) == doctest::Approx(2.3906).epsilon(1e-4));
}

TEST_CASE("newton config validation") {
  NewtonConfig cfg;
  cfg.sigma = 0.25;  // above (5-sqrt(17))/4
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.sigma = 0.2;
  cfg.eps = 0.3;  // must be below sigma
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.eps = 1e-6;
  CHECK_NOTHROW(cfg.validate());
  CHECK(kSigmaBarFull == doctest::Approx(0.219224).epsilon(1e-5));
  CHECK(kSigmaBarDamped == doctest::Approx(0.236068).epsilon(1e-5));
}

TEST_CASE("newton direction reduces to the Newton system when g = 0") {
  Rng rng(41);
  const Index p = 3;
  GraphProblem gp = synth_gmrf(p, 0.4, 0, 5, 0.1);
  ProblemInstance inst = logdet_instance(gp);
  inst.reg = std::make_shared<ZeroReg>();
  SubsolverControls sub;
  sub.tol = 1e-11;
  sub.max_iter = 20000;
  const SearchDirectionResult dir = newton_direction(inst, inst.x0, sub);

  LogDetOracle oracle(gp.sigma_hat);
  auto pt = oracle.at(inst.x0);
  const Vec expect = -pt->hess_solve(pt->gradient());
  CHECK((dir.d - expect).norm() <= 1e-7 * (1.0 + expect.norm()));
  CHECK(dir.lambda ==
        doctest::Approx(dual_local_norm(*pt, pt->gradient())).epsilon(1e-6));
  CHECK(dir.beta == dir.lambda);
}

TEST_CASE("newton direction vanishes at a KKT point") {
  // Diagonal-dominant rho: Theta* = diag(1/(sigma_ii + rho)).
  Rng rng(42);
  Mat sigma = random_spd(rng, 4, 1.0);
  const double rho = 1.1 * sigma.cwiseAbs().maxCoeff();
  GraphProblem gp = make_graph_problem(sigma, rho);
  ProblemInstance inst = logdet_instance(gp);
  SubsolverControls sub;
  sub.tol = 1e-12;
  sub.max_iter = 50000;
  const SearchDirectionResult dir = newton_direction(inst, inst.x0, sub);
  CHECK(dir.lambda <= 1e-7);
}

TEST_CASE("newton direction matches enumeration on a p=2 instance") {
  Mat sigma = Mat::Identity(2, 2);
  GraphProblem gp = make_graph_problem(sigma, 0.1);
  gp.theta0 = 2.0 * Mat::Identity(2, 2);
  ProblemInstance inst = logdet_instance(gp);
  SubsolverControls sub;
  sub.tol = 1e-11;
  sub.max_iter = 50000;
  const SearchDirectionResult dir = newton_direction(inst, inst.x0, sub);

  LogDetOracle oracle(sigma);
  auto pt = oracle.at(inst.x0);
  // Dense Kronecker Hessian for the brute force.
  const Index n = 4;
  Mat H(n, n);
  for (Index j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e(j) = 1.0;
    H.col(j) = pt->hess_vec(e);
  }
  const Vec q = pt->gradient() - H * inst.x0;
  const Vec expect = l1_quadratic_bruteforce(H, q, gp.rho);
  CHECK((dir.s - expect).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("select_step behaviors per strategy") {
  NewtonConfig cfg;
  int probes = 0;
  auto no_probe = [&](double) -> double {
    ++probes;
    return kInf;
  };

  SUBCASE("NoLS uses the analytic step and never evaluates") {
    const StepChoice sc =
        select_step(StepStrategy::NoLS, 4.0, 0.2, kInf, 0.0, no_probe, cfg);
    CHECK(sc.alpha == doctest::Approx(0.2));
    CHECK(probes == 0);
    const StepChoice full =
        select_step(StepStrategy::NoLS, 0.1, 0.2, kInf, 0.0, no_probe, cfg);
    CHECK(full.alpha == 1.0);
    CHECK(probes == 0);
  }

  SUBCASE("FwLS and E-BtkLS take the full step inside the region, free") {
    for (auto s : {StepStrategy::FwLS, StepStrategy::EBtkLS}) {
      const StepChoice sc =
          select_step(s, 0.15, 0.2, kInf, 0.0, no_probe, cfg);
      CHECK(sc.alpha == 1.0);
      CHECK(sc.evals_used == 0);
    }
    CHECK(probes == 0);
  }

  SUBCASE("FwLS on a quadratic accepts the exact minimizer at alpha = 1") {
    // f(a) = (a - 1)^2 along the ray: strictly improving up to 1.
    auto qprobe = [&](double a) { return (a - 1.0) * (a - 1.0); };
    const StepChoice sc =
        select_step(StepStrategy::FwLS, 0.9, 0.2, 4.0, -1.0, qprobe, cfg);
    CHECK(sc.alpha == 1.0);
    CHECK(!sc.degraded);
  }

  SUBCASE("FwLS stops at the last improving probe") {
    // Improves until alpha exceeds 0.8, then worsens.
    auto vprobe = [&](double a) { return std::fabs(a - 0.8); };
    const StepChoice sc =
        select_step(StepStrategy::FwLS, 1.0, 0.2, 10.0, -1.0, vprobe, cfg);
    CHECK(sc.alpha == doctest::Approx(1.0).epsilon(1e-12));
    // alpha* = 0.5, probes 0.5 then 1.0: |1-0.8| < |0.5-0.8| so 1 wins.
  }

  SUBCASE("BtkLS backtracks until Armijo holds") {
    // F(x) = 10; slope = -8; F(x + a d) = 10 - 8a only for a <= 1/4.
    auto bprobe = [&](double a) { return a <= 0.25 ? 10.0 - 8.0 * a : 11.0; };
    const StepChoice sc =
        select_step(StepStrategy::BtkLS, 3.0, 0.2, 10.0, -8.0, bprobe, cfg);
    CHECK(sc.alpha == doctest::Approx(0.25));
  }

  SUBCASE("E-BtkLS falls back to alpha* when backtracking reaches it") {
    auto never = [&](double) { return kInf; };
    const StepChoice sc =
        select_step(StepStrategy::EBtkLS, 3.0, 0.2, 10.0, -8.0, never, cfg);
    CHECK(sc.alpha == doctest::Approx(0.25));  // 1/(1+3)
    CHECK(!sc.degraded);
  }
}

TEST_CASE("solve_newton terminates immediately at the solution") {
  Rng rng(43);
  Mat sigma = random_spd(rng, 4, 1.0);
  const double rho = 1.1 * sigma.cwiseAbs().maxCoeff();
  GraphProblem gp = make_graph_problem(sigma, rho);
  ProblemInstance inst = logdet_instance(gp);  // theta0 IS the solution
  NewtonConfig cfg;
  cfg.eps = 1e-5;
  const NewtonResult res = solve_newton(inst, cfg);
  CHECK(res.trace.converged());
  CHECK(res.trace.records.size() == 1);
  CHECK(res.trace.records[0].lambda <= 1e-5);
}

TEST_CASE("solve_newton reaches the diagonal closed form") {
  Rng rng(44);
  Mat sigma = random_spd(rng, 5, 1.0);
  double offmax = 0.0;
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) {
      if (i != j) offmax = std::max(offmax, std::fabs(sigma(i, j)));
    }
  }
  const double rho = offmax * 1.2;
  GraphProblem gp = make_graph_problem(sigma, rho);
  gp.theta0 = Mat::Identity(5, 5);  // start away from the solution
  ProblemInstance inst = logdet_instance(gp);
  NewtonConfig cfg;
  cfg.eps = 1e-8;
  cfg.sub.tol = 1e-10;
  cfg.sub.max_iter = 20000;
  const NewtonResult res = solve_newton(inst, cfg);
  REQUIRE(res.trace.converged());
  Eigen::Map<const Mat> theta(res.x.data(), 5, 5);
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) {
      const double expect = i == j ? 1.0 / (sigma(i, i) + rho) : 0.0;
      CHECK(std::fabs(theta(i, j) - expect) <= 1e-6);
    }
  }
  // KKT residual of Eq. (2') at the solution.
  const Mat inv = theta.inverse();
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) {
      const double g = sigma(i, j) - inv(i, j);
      if (std::fabs(theta(i, j)) > 1e-9) {
        CHECK(std::fabs(g + rho * (theta(i, j) > 0 ? 1 : -1)) <= 1e-6);
      } else {
        CHECK(std::fabs(g) <= rho + 1e-6);
      }
    }
  }
  CHECK(!res.trace.anomaly_descent);
  CHECK(!res.trace.anomaly_contraction);
}

TEST_CASE("solve_newton trace shows damped descent and phase behavior") {
  GraphProblem gp = synth_gmrf(8, 0.25, 0, 77, 0.02);
  ProblemInstance inst = logdet_instance(gp);
  NewtonConfig cfg;
  cfg.eps = 1e-7;
  cfg.record_objective = true;
  const NewtonResult res = solve_newton(inst, cfg);
  REQUIRE(res.trace.converged());
  CHECK(!res.trace.anomaly_descent);
  CHECK(!res.trace.anomaly_phase_reentry);
  CHECK(!res.trace.anomaly_contraction);
  const auto& rows = res.trace.records;
  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    if (rows[k].lambda > cfg.sigma) {
      CHECK(rows[k + 1].F <= rows[k].F - omega(rows[k].lambda) +
                                 1e-8 * (1.0 + std::fabs(rows[k].F)));
      CHECK(rows[k].alpha ==
            doctest::Approx(1.0 / (1.0 + rows[k].lambda)).epsilon(1e-12));
    } else if (k + 1 < rows.size()) {
      CHECK(rows[k].alpha == 1.0);
      CHECK(rows[k + 1].lambda <= rows[k].lambda + 1e-12);
      const double lam = rows[k].lambda;
      if (lam <= 0.2) {
        CHECK(rows[k + 1].lambda <=
              lam * lam / (1.0 - 4.0 * lam + 2.0 * lam * lam) + 1e-7);
      }
    }
  }
}

TEST_CASE("bfgs update keeps the secant equation and positive definiteness") {
  SUBCASE("axis example") {
    const Mat H = Mat::Identity(3, 3);
    Vec z = Vec::Zero(3), y = Vec::Zero(3);
    z(0) = 1.0;
    y(0) = 2.0;
    const Mat Hp = bfgs_update(H, z, y);
    CHECK((Hp * z - y).norm() <= 1e-14);
    Eigen::SelfAdjointEigenSolver<Mat> eig(Hp);
    CHECK(eig.eigenvalues().minCoeff() > 0);
  }
  SUBCASE("fixed point when y = Hz") {
    Rng rng(45);
    const Mat H = random_spd(rng, 4, 0.5);
    const Vec z = rng.normal_vec(4);
    const Vec y = H * z;
    const Mat Hp = bfgs_update(H, z, y);
    CHECK((Hp - H).norm() <= 1e-12 * H.norm());
  }
  SUBCASE("random instances") {
    Rng rng(46);
    for (int rep = 0; rep < 100; ++rep) {
      const Mat H = random_spd(rng, 6, 0.4);
      Vec z = rng.normal_vec(6);
      Vec y = rng.normal_vec(6);
      if (y.dot(z) <= 0) y = -y;
      if (y.dot(z) <= 1e-12 * y.norm() * z.norm()) continue;
      const Mat Hp = bfgs_update(H, z, y);
      CHECK((Hp * z - y).norm() <= 1e-12 * y.norm());
      Eigen::SelfAdjointEigenSolver<Mat> eig(Hp);
      CHECK(eig.eigenvalues().minCoeff() > 0);
    }
  }
  SUBCASE("curvature violation throws") {
    const Mat H = Mat::Identity(2, 2);
    Vec z(2), y(2);
    z << 1.0, 0.0;
    y << -1.0, 0.0;
    CHECK_THROWS_AS(bfgs_update(H, z, y), CurvatureError);
  }
}
