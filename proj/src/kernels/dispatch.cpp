#include <cstdlib>
#include <cstring>

#include "stablab/kernels.hpp"

namespace stablab::kernels {

#ifdef STABLAB_HAVE_AVX2
const KernelTable* avx2_table_unchecked();
#endif

const KernelTable* avx2_table() {
#ifdef STABLAB_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* forced = std::getenv("STABLAB_KERNELS");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return scalar_table();
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace stablab::kernels
