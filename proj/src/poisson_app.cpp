#include "scomp/apps/poisson.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <vector>

#include "scomp/oracles/poisson.hpp"
#include "scomp/rng.hpp"

namespace scomp {

SpMat make_blur_operator(Index height, Index width, int radius) {
  if (radius < 0) throw DomainError("make_blur_operator: radius < 0");
  const Index n = height * width;
  std::vector<Eigen::Triplet<double>> trips;
  const int k = 2 * radius + 1;
  const double w0 = 1.0 / (k * k);
  trips.reserve(static_cast<size_t>(n) * k * k);
  std::vector<double> row(static_cast<size_t>(n));
  for (Index i = 0; i < height; ++i) {
    for (Index j = 0; j < width; ++j) {
      const Index out = i * width + j;
      // Replicate boundary: clamped neighbors accumulate their weight.
      for (int di = -radius; di <= radius; ++di) {
        for (int dj = -radius; dj <= radius; ++dj) {
          const Index ii = std::clamp<Index>(i + di, 0, height - 1);
          const Index jj = std::clamp<Index>(j + dj, 0, width - 1);
          trips.emplace_back(out, ii * width + jj, w0);
        }
      }
    }
  }
  SpMat A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());  // duplicates summed
  A.makeCompressed();
  return A;
}

Vec make_phantom(Index height, Index width, double intensity) {
  if (!(intensity > 0)) throw DomainError("make_phantom: intensity must be > 0");
  Vec img(height * width);
  const double blobs[3][4] = {
      // cy, cx, radius fraction, amplitude
      {0.35, 0.30, 0.18, 1.00},
      {0.62, 0.68, 0.24, 0.75},
      {0.78, 0.25, 0.12, 0.55},
  };
  for (Index i = 0; i < height; ++i) {
    for (Index j = 0; j < width; ++j) {
      const double y = (i + 0.5) / height;
      const double x = (j + 0.5) / width;
      double v = 0.02;
      for (const auto& b : blobs) {
        const double dy = (y - b[0]) / b[2];
        const double dx = (x - b[1]) / b[2];
        v += b[3] * std::exp(-0.5 * (dx * dx + dy * dy));
      }
      img(i * width + j) = v;
    }
  }
  img *= intensity / img.maxCoeff();
  return img;
}

PoissonProblem make_poisson_problem(SpMat A, Vec y, Index height, Index width,
                                    double rho) {
  if (A.rows() != y.size()) {
    throw DomainError("PoissonProblem: A rows and y size mismatch");
  }
  if (A.cols() != height * width) {
    throw DomainError("PoissonProblem: operator does not match image shape");
  }
  if (!(rho >= 0)) throw DomainError("PoissonProblem: rho must be >= 0");
  PoissonProblem prob;
  prob.A = std::move(A);
  prob.y = std::move(y);
  prob.rho = rho;
  prob.height = height;
  prob.width = width;

  // Least-squares positive part + floor, strictly interior by construction.
  const Index n = prob.A.cols();
  Eigen::SparseMatrix<double> Acm = prob.A;
  Eigen::SparseMatrix<double> normal = Acm.transpose() * Acm;
  double diag_max = 1.0;
  for (Index i = 0; i < n; ++i) diag_max = std::max(diag_max, normal.coeff(i, i));
  Eigen::SparseMatrix<double> eye(n, n);
  eye.setIdentity();
  normal += 1e-8 * diag_max * eye;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(normal);
  Vec x0;
  if (solver.info() == Eigen::Success) {
    x0 = solver.solve(prob.A.transpose() * prob.y);
  } else {
    x0 = Vec::Zero(n);
  }
  const double peak = std::max(x0.maxCoeff(), 1.0);
  const double floor = std::max(1e-3 * peak, 1e-8);
  prob.x0 = x0.cwiseMax(0.0).array() + floor;
  return prob;
}

PoissonProblem synth_poisson(Index height, Index width, int blur_radius,
                             double intensity, std::uint64_t seed, double rho,
                             const Vec* image) {
  Vec x_true;
  if (image) {
    if (image->size() != height * width) {
      throw DomainError("synth_poisson: image size mismatch");
    }
    if ((image->array() < 0).any()) {
      throw DomainError("synth_poisson: image must be nonnegative");
    }
    x_true = *image;
  } else {
    x_true = make_phantom(height, width, intensity);
  }
  SpMat A = make_blur_operator(height, width, blur_radius);
  const Vec mean = A * x_true;
  Rng rng(seed);
  Vec y(mean.size());
  for (Index i = 0; i < mean.size(); ++i) {
    y(i) = static_cast<double>(rng.poisson(mean(i)));
  }
  return make_poisson_problem(std::move(A), std::move(y), height, width, rho);
}

PoissonSolveResult poisson_solve(const PoissonProblem& prob, GradConfig cfg,
                                 bool greedy) {
  auto oracle = std::make_shared<PoissonOracle>(prob.A, prob.y);
  auto reg = std::make_shared<TVNonnegReg>(oracle->scale() * prob.rho,
                                           prob.height, prob.width, prob.tv);
  ProblemInstance inst;
  inst.oracle = oracle;
  inst.reg = reg;
  inst.x0 = prob.x0;
  inst.decrement = [](const OraclePoint& pt, const Vec& d) {
    return dynamic_cast<const PoissonOracle::Point&>(pt).decrement(d);
  };

  cfg.term = GradTermination::DirNormOverSqrtL;
  cfg.greedy = greedy;
  GradResult run = solve_grad(inst, cfg);

  PoissonSolveResult res;
  res.M = oracle->M();
  res.trace = std::move(run.trace);
  res.trace.method = greedy ? "proxgrad2g" : "proxgrad2";
  res.x = std::move(run.x);

  // Fixed-point self-consistency at the final iterate, measured with the
  // gradient-mapping step 1/L* at the spectral estimate of the final
  // Hessian. The trajectory's last Barzilai-Borwein L would make this
  // snapshot noisy; the canonical step does not.
  {
    Counters scratch;
    auto pt = oracle->at(res.x, &scratch);
    auto ws = reg->make_workspace();
    const double L_star = std::max(
        power_method_max_eig(
            [&](const Vec& v, Vec& o) { pt->hess_vec(v, o); }, res.x.size(),
            30),
        1e-12);
    Vec d_ones = Vec::Constant(res.x.size(), L_star);
    Vec s = reg->prox_diag(L_star * res.x - pt->gradient(), d_ones, ws.get(),
                           &scratch);
    res.final_fp_residual =
        (s - res.x).norm() / std::max(1.0, res.x.norm());
  }
  return res;
}

}  // namespace scomp
