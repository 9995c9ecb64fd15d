#pragma once

#include <cstddef>

// Internal dispatch table shared by the kernel translation units.

namespace hybuse::kernels::detail {

struct Backend {
  const char* name;
  double (*dot)(const double*, const double*, std::size_t);
  double (*squared_norm)(const double*, std::size_t);
  double (*squared_distance)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  void (*matvec)(const double*, std::size_t, std::size_t, const double*,
                 const double*, double*);
  void (*matvec_transposed)(const double*, std::size_t, std::size_t,
                            const double*, double*);
  void (*outer_acc)(double*, std::size_t, std::size_t, const double*,
                    const double*);
  void (*relu)(const double*, double*, std::size_t);
  void (*relu_backward)(const double*, double*, std::size_t);
};

// Always available.
const Backend& scalar_backend();

// Non-null only when the binary was compiled with AVX2 support; the caller
// must still check CPU features before selecting it.
const Backend* avx2_backend();

}  // namespace hybuse::kernels::detail
