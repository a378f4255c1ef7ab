#include <cstdlib>
#include <string>

#include "indet/kernels.hpp"

namespace indet::simd {

namespace detail {
#if !defined(INDET_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(INDET_HAVE_NEON)
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(INDET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* forced = std::getenv("INDET_SIMD")) {
    const std::string name(forced);
    if (name == "scalar") return detail::scalar_table();
    if (name == "avx2") {
      if (const auto* t = table_for(Isa::Avx2)) return *t;
    }
    if (name == "neon") {
      if (const auto* t = table_for(Isa::Neon)) return *t;
    }
  }
  if (const auto* t = table_for(Isa::Avx2)) return *t;
  if (const auto* t = table_for(Isa::Neon)) return *t;
  return detail::scalar_table();
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return &detail::scalar_table();
    case Isa::Avx2: return cpu_has_avx2() ? detail::avx2_table() : nullptr;
    case Isa::Neon: return detail::neon_table();
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
    if (table_for(isa) != nullptr) out.push_back(isa);
  return out;
}

}  // namespace indet::simd
