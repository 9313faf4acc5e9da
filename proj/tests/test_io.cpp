#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "scomp/io/io.hpp"
#include "scomp/solver/trace.hpp"

using namespace scomp;
using namespace scomp::testing;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/scomp_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& text) const {
    std::ofstream os(path);
    os << text;
  }
};

SolverTrace sample_trace() {
  SolverTrace t;
  t.method = "dpngs/fwls";
  t.exit_code = 0;
  t.exit_reason = "converged";
  t.eps = 1e-6;
  t.final_decrement = 3.25e-7;
  t.sigma_gate = 0.2;
  t.sigma_bar = 0.23606797749978969;
  for (int k = 0; k < 3; ++k) {
    TraceRecord r;
    r.k = k;
    r.F = 5.123456789012345 - 0.1 * k;
    r.lambda = std::pow(0.3, k + 1);
    r.beta = r.lambda;
    r.alpha = k == 2 ? std::numeric_limits<double>::quiet_NaN() : 0.75;
    r.L = std::numeric_limits<double>::quiet_NaN();
    r.n_chol = k;
    r.n_matmul = 11 * (k + 1);
    r.n_prox = 3 * k;
    r.n_feval = k;
    r.wall_ms = 0.125 * (k + 1);
    t.records.push_back(r);
  }
  return t;
}

void check_equal(const SolverTrace& a, const SolverTrace& b) {
  CHECK(a.method == b.method);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.exit_reason == b.exit_reason);
  CHECK(a.eps == b.eps);
  CHECK(a.final_decrement == b.final_decrement);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    CHECK(x.k == y.k);
    CHECK((x.F == y.F || (std::isnan(x.F) && std::isnan(y.F))));
    CHECK(x.lambda == y.lambda);  // bitwise round trip
    CHECK(x.beta == y.beta);
    CHECK((x.alpha == y.alpha ||
           (std::isnan(x.alpha) && std::isnan(y.alpha))));
    CHECK((x.L == y.L || (std::isnan(x.L) && std::isnan(y.L))));
    CHECK(x.n_chol == y.n_chol);
    CHECK(x.n_matmul == y.n_matmul);
    CHECK(x.n_prox == y.n_prox);
    CHECK(x.n_feval == y.n_feval);
    CHECK(x.wall_ms == y.wall_ms);
  }
}

}  // namespace

TEST_CASE("matrix market coordinate symmetric round trip") {
  TempFile f("coord.mtx");
  f.write("%%MatrixMarket matrix coordinate real symmetric\n"
          "% comment line\n"
          "3 3 4\n"
          "1 1 2.5\n"
          "2 2 3.0\n"
          "3 3 1.25\n"
          "3 1 -0.5\n");
  const Mat m = read_matrix_market(f.path);
  CHECK(m(0, 0) == 2.5);
  CHECK(m(2, 0) == -0.5);
  CHECK(m(0, 2) == -0.5);  // mirrored
  CHECK(m(1, 2) == 0.0);
}

TEST_CASE("matrix market array formats") {
  TempFile f("array.mtx");
  f.write("%%MatrixMarket matrix array real general\n"
          "2 2\n"
          "1\n2\n3\n4\n");
  const Mat m = read_matrix_market(f.path);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 0) == 2.0);  // column major
  CHECK(m(0, 1) == 3.0);

  TempFile s("array_sym.mtx");
  s.write("%%MatrixMarket matrix array real symmetric\n"
          "2 2\n"
          "5\n-1\n7\n");
  const Mat ms = read_matrix_market(s.path);
  CHECK(ms(0, 0) == 5.0);
  CHECK(ms(1, 0) == -1.0);
  CHECK(ms(0, 1) == -1.0);
  CHECK(ms(1, 1) == 7.0);
}

TEST_CASE("matrix market writer round trip and error paths") {
  Rng rng(71);
  Mat m = random_spd(rng, 4, 0.3);
  TempFile f("rt.mtx");
  write_matrix_market(m, f.path);
  const Mat back = read_matrix_market(f.path);
  CHECK((m - back).norm() == 0.0);

  CHECK_THROWS_AS(read_matrix_market("/nonexistent/file.mtx"), IoError);
  TempFile bad("bad.mtx");
  bad.write("not a matrix market file\n1 1 1\n");
  CHECK_THROWS_AS(read_matrix_market(bad.path), IoError);
}

TEST_CASE("csv round trip with header") {
  CsvTable t;
  t.columns = {"x1", "x2", "y"};
  t.data.resize(3, 3);
  t.data << 1.5, -2.25, 0.001953125, 4.0, 5.0, -6.0, 0.1, 0.2, 0.3;
  TempFile f("table.csv");
  write_csv(t, f.path);
  const CsvTable back = read_csv(f.path);
  REQUIRE(back.columns.size() == 3);
  CHECK(back.columns[2] == "y");
  CHECK((back.data - t.data).cwiseAbs().maxCoeff() <= 1e-15);

  TempFile ragged("ragged.csv");
  ragged.write("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged.path), IoError);
}

TEST_CASE("pgm ascii and binary round trips") {
  PgmImage img;
  img.height = 3;
  img.width = 4;
  img.maxval = 255;
  img.pixels.resize(12);
  for (Index i = 0; i < 12; ++i) img.pixels(i) = double((i * 21) % 256);

  TempFile p2("img.p2.pgm");
  write_pgm(img, p2.path, false);
  const PgmImage back2 = read_pgm(p2.path);
  CHECK(back2.height == 3);
  CHECK(back2.width == 4);
  CHECK((back2.pixels - img.pixels).norm() == 0.0);

  TempFile p5("img.p5.pgm");
  write_pgm(img, p5.path, true);
  const PgmImage back5 = read_pgm(p5.path);
  CHECK((back5.pixels - img.pixels).norm() == 0.0);

  // 16-bit samples use two big-endian bytes.
  img.maxval = 65535;
  img.pixels *= 100.0;
  TempFile p16("img16.pgm");
  write_pgm(img, p16.path, true);
  const PgmImage back16 = read_pgm(p16.path);
  CHECK((back16.pixels - img.pixels).norm() == 0.0);

  TempFile huge("huge.pgm");
  huge.write("P2\n1 1\n70000\n1\n");
  CHECK_THROWS_AS(read_pgm(huge.path), IoError);
}

TEST_CASE("trace json round trip preserves every field") {
  const SolverTrace t = sample_trace();
  const SolverTrace back = trace_from_json(trace_to_json(t));
  check_equal(t, back);
}

TEST_CASE("trace csv round trip preserves every field") {
  const SolverTrace t = sample_trace();
  const SolverTrace back = trace_from_csv(trace_to_csv(t));
  check_equal(t, back);
}

TEST_CASE("trace json-csv-json round trip is lossless") {
  const SolverTrace t = sample_trace();
  const SolverTrace back =
      trace_from_csv(trace_to_csv(trace_from_json(trace_to_json(t))));
  check_equal(t, back);
}

TEST_CASE("empty trace exports to a bare header") {
  SolverTrace t;
  t.method = "none";
  const std::string csv = trace_to_csv(t);
  CHECK(csv.find("k,F,lambda") != std::string::npos);
  const SolverTrace back = trace_from_csv(csv);
  CHECK(back.records.empty());
}

TEST_CASE("malformed traces raise IoError") {
  CHECK_THROWS_AS(trace_from_json("{ not json"), IoError);
  CHECK_THROWS_AS(trace_from_json("{\"schema\": 9}"), IoError);
  CHECK_THROWS_AS(trace_from_csv("k,F\n"), IoError);
}
