#include <cstdlib>
#include <string>

#include "cubewaring/error.hpp"
#include "cubewaring/kernels.hpp"

namespace cubewaring::kernels {

#if !defined(CUBEWARING_HAVE_AVX2)
const KernelTable* detail::avx2_table() { return nullptr; }
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(CUBEWARING_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) {
    throw UnsupportedError("kernel ISA not available: " + std::string(isa_name(isa)));
  }
  if (isa == Isa::avx2) return *detail::avx2_table();
  return detail::scalar_table();
}

namespace {

Isa select_isa() {
  if (const char* forced = std::getenv("CUBEWARING_SIMD")) {
    const std::string value(forced);
    if (value == "scalar") return Isa::scalar;
    if (value == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& selected = table(select_isa());
  return selected;
}

}  // namespace cubewaring::kernels
