#pragma once

#include <string>
#include <vector>

#include "scomp/types.hpp"

namespace scomp {

// One row per outer iteration; counters are cumulative snapshots.
struct TraceRecord {
  int k = 0;
  double F = 0;       // NaN when the strategy never evaluated it
  double lambda = 0;
  double beta = 0;
  double alpha = 0;   // NaN on the terminal row
  double L = 0;       // NaN for Newton-type methods
  std::int64_t n_chol = 0;
  std::int64_t n_matmul = 0;
  std::int64_t n_prox = 0;
  std::int64_t n_feval = 0;
  double wall_ms = 0;  // solver loop only
};

struct SolverTrace {
  std::string method;
  int exit_code = 0;  // 0 converged, 2 iteration budget
  std::string exit_reason;
  double eps = 0;
  double final_decrement = 0;
  // Newton metadata: the phase gate actually used and the damped-phase
  // radius sqrt(5) - 2 from the theory, recorded side by side.
  double sigma_gate = 0;
  double sigma_bar = 0;
  bool anomaly_phase_reentry = false;
  bool anomaly_descent = false;
  bool anomaly_contraction = false;
  bool lambda_sq_clamped = false;
  std::vector<TraceRecord> records;

  bool converged() const { return exit_code == 0; }
};

// Versioned JSON (schema 1) and CSV with '#'-prefixed metadata; both carry
// every numeric field at full round-trip precision.
std::string trace_to_json(const SolverTrace& t);
SolverTrace trace_from_json(const std::string& text);
std::string trace_to_csv(const SolverTrace& t);
SolverTrace trace_from_csv(const std::string& text);

void write_trace(const SolverTrace& t, const std::string& path,
                 const std::string& format);  // "json" | "csv"
SolverTrace read_trace(const std::string& path);

}  // namespace scomp
