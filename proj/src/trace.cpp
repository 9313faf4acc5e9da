#include "scomp/solver/trace.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace scomp {

namespace {

using nlohmann::json;

double num_or_nan(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json nan_to_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string trace_to_json(const SolverTrace& t) {
  json j;
  j["schema"] = 1;
  j["method"] = t.method;
  j["exit_code"] = t.exit_code;
  j["exit_reason"] = t.exit_reason;
  j["eps"] = nan_to_null(t.eps);
  j["final_decrement"] = nan_to_null(t.final_decrement);
  j["sigma_gate"] = nan_to_null(t.sigma_gate);
  j["sigma_bar"] = nan_to_null(t.sigma_bar);
  j["anomaly_phase_reentry"] = t.anomaly_phase_reentry;
  j["anomaly_descent"] = t.anomaly_descent;
  j["anomaly_contraction"] = t.anomaly_contraction;
  j["lambda_sq_clamped"] = t.lambda_sq_clamped;
  json rows = json::array();
  for (const auto& r : t.records) {
    rows.push_back({{"k", r.k},
                    {"F", nan_to_null(r.F)},
                    {"lambda", nan_to_null(r.lambda)},
                    {"beta", nan_to_null(r.beta)},
                    {"alpha", nan_to_null(r.alpha)},
                    {"L", nan_to_null(r.L)},
                    {"n_chol", r.n_chol},
                    {"n_matmul", r.n_matmul},
                    {"n_prox", r.n_prox},
                    {"n_feval", r.n_feval},
                    {"wall_ms", nan_to_null(r.wall_ms)}});
  }
  j["records"] = std::move(rows);
  return j.dump(2);
}

SolverTrace trace_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed trace JSON: ") + e.what());
  }
  if (!j.contains("schema") || j["schema"].get<int>() != 1) {
    throw IoError("unsupported trace schema");
  }
  SolverTrace t;
  try {
    t.method = j.value("method", "");
    t.exit_code = j.value("exit_code", 0);
    t.exit_reason = j.value("exit_reason", "");
    t.eps = num_or_nan(j.at("eps"));
    t.final_decrement = num_or_nan(j.at("final_decrement"));
    t.sigma_gate = num_or_nan(j.at("sigma_gate"));
    t.sigma_bar = num_or_nan(j.at("sigma_bar"));
    t.anomaly_phase_reentry = j.value("anomaly_phase_reentry", false);
    t.anomaly_descent = j.value("anomaly_descent", false);
    t.anomaly_contraction = j.value("anomaly_contraction", false);
    t.lambda_sq_clamped = j.value("lambda_sq_clamped", false);
    for (const auto& row : j.at("records")) {
      TraceRecord r;
      r.k = row.at("k").get<int>();
      r.F = num_or_nan(row.at("F"));
      r.lambda = num_or_nan(row.at("lambda"));
      r.beta = num_or_nan(row.at("beta"));
      r.alpha = num_or_nan(row.at("alpha"));
      r.L = num_or_nan(row.at("L"));
      r.n_chol = row.at("n_chol").get<std::int64_t>();
      r.n_matmul = row.at("n_matmul").get<std::int64_t>();
      r.n_prox = row.at("n_prox").get<std::int64_t>();
      r.n_feval = row.at("n_feval").get<std::int64_t>();
      r.wall_ms = num_or_nan(row.at("wall_ms"));
      t.records.push_back(r);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed trace JSON: ") + e.what());
  }
  return t;
}

std::string trace_to_csv(const SolverTrace& t) {
  std::ostringstream os;
  os << "# scomp-trace schema=1\n";
  os << "# method=" << t.method << "\n";
  os << "# exit_code=" << t.exit_code << "\n";
  os << "# exit_reason=" << t.exit_reason << "\n";
  os << "# eps=" << fmt_double(t.eps) << "\n";
  os << "# final_decrement=" << fmt_double(t.final_decrement) << "\n";
  os << "# sigma_gate=" << fmt_double(t.sigma_gate) << "\n";
  os << "# sigma_bar=" << fmt_double(t.sigma_bar) << "\n";
  os << "# anomaly_phase_reentry=" << int(t.anomaly_phase_reentry) << "\n";
  os << "# anomaly_descent=" << int(t.anomaly_descent) << "\n";
  os << "# anomaly_contraction=" << int(t.anomaly_contraction) << "\n";
  os << "# lambda_sq_clamped=" << int(t.lambda_sq_clamped) << "\n";
  os << "k,F,lambda,beta,alpha,L,n_chol,n_matmul,n_prox,n_feval,wall_ms\n";
  for (const auto& r : t.records) {
    os << r.k << ',' << fmt_double(r.F) << ',' << fmt_double(r.lambda) << ','
       << fmt_double(r.beta) << ',' << fmt_double(r.alpha) << ','
       << fmt_double(r.L) << ',' << r.n_chol << ',' << r.n_matmul << ','
       << r.n_prox << ',' << r.n_feval << ',' << fmt_double(r.wall_ms)
       << "\n";
  }
  return os.str();
}

SolverTrace trace_from_csv(const std::string& text) {
  SolverTrace t;
  std::istringstream is(text);
  std::string line;
  bool saw_magic = false, saw_header = false;
  auto meta = [&](const std::string& l, const std::string& key) -> const char* {
    const std::string pat = "# " + key + "=";
    if (l.rfind(pat, 0) == 0) return l.c_str() + pat.size();
    return nullptr;
  };
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# scomp-trace", 0) == 0) saw_magic = true;
      if (const char* v = meta(line, "method")) t.method = v;
      if (const char* v = meta(line, "exit_code")) t.exit_code = std::atoi(v);
      if (const char* v = meta(line, "exit_reason")) t.exit_reason = v;
      if (const char* v = meta(line, "eps")) t.eps = std::strtod(v, nullptr);
      if (const char* v = meta(line, "final_decrement"))
        t.final_decrement = std::strtod(v, nullptr);
      if (const char* v = meta(line, "sigma_gate"))
        t.sigma_gate = std::strtod(v, nullptr);
      if (const char* v = meta(line, "sigma_bar"))
        t.sigma_bar = std::strtod(v, nullptr);
      if (const char* v = meta(line, "anomaly_phase_reentry"))
        t.anomaly_phase_reentry = std::atoi(v) != 0;
      if (const char* v = meta(line, "anomaly_descent"))
        t.anomaly_descent = std::atoi(v) != 0;
      if (const char* v = meta(line, "anomaly_contraction"))
        t.anomaly_contraction = std::atoi(v) != 0;
      if (const char* v = meta(line, "lambda_sq_clamped"))
        t.lambda_sq_clamped = std::atoi(v) != 0;
      continue;
    }
    if (!saw_header) {
      if (line.rfind("k,", 0) != 0) throw IoError("malformed trace CSV header");
      saw_header = true;
      continue;
    }
    TraceRecord r;
    char* p = const_cast<char*>(line.c_str());
    auto next = [&]() -> double {
      const double v = std::strtod(p, &p);
      if (*p == ',') ++p;
      return v;
    };
    r.k = static_cast<int>(next());
    r.F = next();
    r.lambda = next();
    r.beta = next();
    r.alpha = next();
    r.L = next();
    r.n_chol = static_cast<std::int64_t>(next());
    r.n_matmul = static_cast<std::int64_t>(next());
    r.n_prox = static_cast<std::int64_t>(next());
    r.n_feval = static_cast<std::int64_t>(next());
    r.wall_ms = next();
    t.records.push_back(r);
  }
  if (!saw_magic || !saw_header) throw IoError("not a scomp trace CSV");
  return t;
}

void write_trace(const SolverTrace& t, const std::string& path,
                 const std::string& format) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  if (format == "json") {
    os << trace_to_json(t) << "\n";
  } else if (format == "csv") {
    os << trace_to_csv(t);
  } else {
    throw IoError("unknown trace format: " + format);
  }
}

SolverTrace read_trace(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("input-not-found: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  for (char c : text) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') continue;
    if (c == '{') return trace_from_json(text);
    break;
  }
  return trace_from_csv(text);
}

}  // namespace scomp
