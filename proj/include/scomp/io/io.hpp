#pragma once

#include <string>
#include <vector>

#include "scomp/types.hpp"

namespace scomp {

// Matrix Market reader: coordinate and array formats, real or integer
// fields, general or symmetric storage (symmetric entries are mirrored).
Mat read_matrix_market(const std::string& path);
void write_matrix_market(const Mat& m, const std::string& path);

// Headered CSV of numbers; returns column names and the data block.
struct CsvTable {
  std::vector<std::string> columns;
  Mat data;
};
CsvTable read_csv(const std::string& path);
void write_csv(const CsvTable& table, const std::string& path);

// PGM images, P2 (ascii) and P5 (binary, 1- or 2-byte big-endian samples),
// maxval <= 65535; pixels returned row-major as doubles.
struct PgmImage {
  Index height = 0;
  Index width = 0;
  int maxval = 255;
  Vec pixels;  // length height*width, row-major
};
PgmImage read_pgm(const std::string& path);
void write_pgm(const PgmImage& img, const std::string& path,
               bool binary = true);

}  // namespace scomp
