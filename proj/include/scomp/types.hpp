#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace scomp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Index = Eigen::Index;

// Cumulative operation counters for one solve. Solvers own one (or more) of
// these and thread a pointer through oracle/prox calls; trace rows snapshot
// the totals so reported costs are exact, never estimated.
struct Counters {
  std::int64_t chol = 0;    // matrix factorizations (attempted ones included)
  std::int64_t matmul = 0;  // dense p x p matrix-matrix products
  std::int64_t prox = 0;    // proximal-map evaluations
  std::int64_t feval = 0;   // objective evaluations F = f + g

  Counters& operator+=(const Counters& o) {
    chol += o.chol;
    matmul += o.matmul;
    prox += o.prox;
    feval += o.feval;
    return *this;
  }
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition violated (argument outside the operation's stated domain).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// An oracle returned something inconsistent with its contract (e.g. a
// negative quadratic form from a supposedly PSD Hessian).
class OracleConsistencyError : public Error {
 public:
  explicit OracleConsistencyError(const std::string& what) : Error(what) {}
};

// Hessian system could not be solved; carries the offending pivot index.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& what, Index pivot)
      : Error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
  Index pivot() const { return pivot_; }

 private:
  Index pivot_;
};

// Iterative subproblem solver ran out of iterations; carries the residual
// it reached so callers can report or retune.
class SubsolverFailure : public Error {
 public:
  SubsolverFailure(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Metric operator failed a structural requirement (indefinite, asymmetric,
// or an unsupported shape such as a non-uniform diagonal for the TV prox).
class MetricError : public Error {
 public:
  explicit MetricError(const std::string& what) : Error(what) {}
};

// BFGS curvature condition y'z > 0 failed.
class CurvatureError : public Error {
 public:
  explicit CurvatureError(const std::string& what) : Error(what) {}
};

// The L_k bisection exhausted its halving budget; carries the final state.
class StepConditionFailure : public Error {
 public:
  StepConditionFailure(const std::string& what, double lambda, double beta,
                       double L)
      : Error(what + " (lambda " + std::to_string(lambda) + ", beta " +
              std::to_string(beta) + ", L " + std::to_string(L) + ")"),
        lambda_(lambda),
        beta_(beta),
        L_(L) {}
  double lambda() const { return lambda_; }
  double beta() const { return beta_; }
  double L() const { return L_; }

 private:
  double lambda_, beta_, L_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace scomp
