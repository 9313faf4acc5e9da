#include <cstdlib>
#include <cstring>
#include <string>

#include "scomp/kernels.hpp"

namespace scomp::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Table* avx2_table();
#endif
#if defined(__aarch64__)
const Table* neon_table();
#endif

namespace {

const Table* best_table() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return avx2_table();
  }
#endif
#if defined(__aarch64__)
  return neon_table();
#endif
  return &scalar();
}

const Table* select() {
  if (const char* env = std::getenv("SCOMP_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar();
    for (const Table* t : available()) {
      if (std::strcmp(env, t->name) == 0) return t;
    }
    // Unknown or unsupported request: fall back to scalar.
    return &scalar();
  }
  return best_table();
}

}  // namespace

const Table& active() {
  static const Table* chosen = select();
  return *chosen;
}

std::vector<const Table*> available() {
  std::vector<const Table*> out{&scalar()};
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    out.push_back(avx2_table());
  }
#endif
#if defined(__aarch64__)
  out.push_back(neon_table());
#endif
  return out;
}

}  // namespace scomp::kernels
