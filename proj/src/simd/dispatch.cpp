#include "adamant/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace adamant::simd {
namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::dot,
                              &scalar::gather_permuted,
                              &scalar::permuted_trace};

#if defined(ADAMANT_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::dot, &avx2::gather_permuted,
                            &avx2::permuted_trace};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#if defined(ADAMANT_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, &neon::dot, &neon::gather_permuted,
                            &neon::permuted_trace};
#endif

const KernelTable& select() {
  if (const char* env = std::getenv("ADAMANT_SIMD")) {
    const std::string want(env);
    for (Isa isa : available()) {
      if (to_string(isa) == want) return *table_for(isa);
    }
  }
#if defined(ADAMANT_HAVE_AVX2)
  if (cpu_has_avx2()) return kAvx2;
#endif
#if defined(ADAMANT_HAVE_NEON)
  return kNeon;
#endif
  return kScalar;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#if defined(ADAMANT_HAVE_AVX2)
      if (cpu_has_avx2()) return &kAvx2;
#endif
      return nullptr;
    case Isa::neon:
#if defined(ADAMANT_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (table_for(isa) != nullptr) out.push_back(isa);
  }
  return out;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace adamant::simd
