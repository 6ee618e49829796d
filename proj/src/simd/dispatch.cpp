#include <cstdlib>
#include <string>

#include "edscat/simd.hpp"

namespace edscat::simd {

const Kernels& active() {
  static const Kernels* table = [] {
    const Kernels* avx = avx2_kernels();
    if (const char* env = std::getenv("EDSCAT_SIMD")) {
      const std::string want = env;
      if (want == "scalar") return &scalar_kernels();
      if (want == "avx2" && avx) return avx;
    }
    return avx ? avx : &scalar_kernels();
  }();
  return *table;
}

}  // namespace edscat::simd
