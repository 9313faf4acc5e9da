#include "scomp/io/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scomp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::ifstream open_or_throw(const std::string& path,
                            std::ios_base::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw IoError("input-not-found: " + path);
  return is;
}

}  // namespace

Mat read_matrix_market(const std::string& path) {
  std::ifstream is = open_or_throw(path);
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty Matrix Market file");
  std::istringstream head(lower(line));
  std::string banner, object, format, field, symmetry;
  head >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix") {
    throw IoError("not a Matrix Market matrix: " + path);
  }
  if (format != "coordinate" && format != "array") {
    throw IoError("unsupported Matrix Market format: " + format);
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw IoError("unsupported Matrix Market field: " + field);
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    throw IoError("unsupported Matrix Market symmetry: " + symmetry);
  }

  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  Index rows = 0, cols = 0;
  long long nnz = 0;
  if (format == "coordinate") {
    if (!(sizes >> rows >> cols >> nnz)) {
      throw IoError("malformed Matrix Market size line");
    }
  } else {
    if (!(sizes >> rows >> cols)) {
      throw IoError("malformed Matrix Market size line");
    }
  }
  if (rows <= 0 || cols <= 0) throw IoError("bad Matrix Market dimensions");
  Mat m = Mat::Zero(rows, cols);

  if (format == "coordinate") {
    for (long long k = 0; k < nnz; ++k) {
      Index i, j;
      double v;
      if (!(is >> i >> j >> v)) throw IoError("truncated Matrix Market data");
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw IoError("Matrix Market index out of range");
      }
      m(i - 1, j - 1) = v;
      if (symmetric) m(j - 1, i - 1) = v;
    }
  } else {
    // Array format is column-major; symmetric stores the lower triangle.
    if (symmetric && rows != cols) {
      throw IoError("symmetric array matrix must be square");
    }
    for (Index j = 0; j < cols; ++j) {
      for (Index i = symmetric ? j : 0; i < rows; ++i) {
        double v;
        if (!(is >> v)) throw IoError("truncated Matrix Market data");
        m(i, j) = v;
        if (symmetric) m(j, i) = v;
      }
    }
  }
  return m;
}

void write_matrix_market(const Mat& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "%%MatrixMarket matrix array real general\n";
  os << m.rows() << " " << m.cols() << "\n";
  char buf[40];
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g\n", m(i, j));
      os << buf;
    }
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is = open_or_throw(path);
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.columns.push_back(cell);
  }
  if (table.columns.empty()) throw IoError("CSV without header: " + path);
  std::vector<double> values;
  Index rows = 0;
  const Index cols = static_cast<Index>(table.columns.size());
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string cell;
    Index c = 0;
    while (std::getline(rs, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("non-numeric CSV cell: " + cell);
      }
      ++c;
    }
    if (c != cols) throw IoError("ragged CSV row in " + path);
    ++rows;
  }
  table.data.resize(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) table.data(i, j) = values[i * cols + j];
  }
  return table;
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  for (size_t j = 0; j < table.columns.size(); ++j) {
    os << (j ? "," : "") << table.columns[j];
  }
  os << "\n";
  char buf[40];
  for (Index i = 0; i < table.data.rows(); ++i) {
    for (Index j = 0; j < table.data.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", table.data(i, j));
      os << (j ? "," : "") << buf;
    }
    os << "\n";
  }
}

namespace {

int next_pgm_token(std::istream& is) {
  // Skips whitespace and '#' comments, returns a nonnegative integer.
  while (true) {
    int c = is.get();
    if (c == EOF) throw IoError("truncated PGM header");
    if (std::isspace(c)) continue;
    if (c == '#') {
      while (c != EOF && c != '\n') c = is.get();
      continue;
    }
    int value = 0;
    bool any = false;
    while (c != EOF && std::isdigit(c)) {
      value = value * 10 + (c - '0');
      any = true;
      c = is.get();
    }
    if (!any) throw IoError("malformed PGM header");
    if (c != EOF) is.unget();
    return value;
  }
}

}  // namespace

PgmImage read_pgm(const std::string& path) {
  std::ifstream is = open_or_throw(path, std::ios::in | std::ios::binary);
  char p = 0, kind = 0;
  is.get(p);
  is.get(kind);
  if (p != 'P' || (kind != '2' && kind != '5')) {
    throw IoError("not a P2/P5 PGM: " + path);
  }
  PgmImage img;
  img.width = next_pgm_token(is);
  img.height = next_pgm_token(is);
  img.maxval = next_pgm_token(is);
  if (img.width <= 0 || img.height <= 0) throw IoError("bad PGM dimensions");
  if (img.maxval <= 0 || img.maxval > 65535) {
    throw IoError("PGM maxval out of range (1..65535)");
  }
  const Index n = img.width * img.height;
  img.pixels.resize(n);
  if (kind == '2') {
    for (Index i = 0; i < n; ++i) {
      img.pixels(i) = static_cast<double>(next_pgm_token(is));
    }
  } else {
    is.get();  // single whitespace after maxval
    const int bytes = img.maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(static_cast<size_t>(n) * bytes);
    is.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (is.gcount() != static_cast<std::streamsize>(raw.size())) {
      throw IoError("truncated PGM pixel data");
    }
    for (Index i = 0; i < n; ++i) {
      if (bytes == 1) {
        img.pixels(i) = raw[static_cast<size_t>(i)];
      } else {
        img.pixels(i) = 256.0 * raw[static_cast<size_t>(2 * i)] +
                        raw[static_cast<size_t>(2 * i + 1)];
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (img.pixels(i) > img.maxval) throw IoError("PGM sample exceeds maxval");
  }
  return img;
}

void write_pgm(const PgmImage& img, const std::string& path, bool binary) {
  if (img.pixels.size() != img.height * img.width) {
    throw IoError("PGM image size mismatch");
  }
  std::ofstream os(path, binary ? std::ios::out | std::ios::binary
                                : std::ios::out);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << (binary ? "P5" : "P2") << "\n"
     << img.width << " " << img.height << "\n"
     << img.maxval << "\n";
  const Index n = img.pixels.size();
  auto quant = [&](Index i) {
    const double v = std::min(std::max(img.pixels(i), 0.0),
                              static_cast<double>(img.maxval));
    return static_cast<int>(v + 0.5);
  };
  if (binary) {
    const int bytes = img.maxval > 255 ? 2 : 1;
    for (Index i = 0; i < n; ++i) {
      const int v = quant(i);
      if (bytes == 2) os.put(static_cast<char>((v >> 8) & 0xff));
      os.put(static_cast<char>(v & 0xff));
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      os << quant(i) << ((i + 1) % img.width == 0 ? '\n' : ' ');
    }
  }
}

}  // namespace scomp
