#include "hybuse/kernels.hpp"

#include <cstdlib>

#include "backend.hpp"

namespace hybuse::kernels {
namespace {

using detail::Backend;

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Backend* avx2_if_usable() {
  const Backend* b = detail::avx2_backend();
  return (b && cpu_supports_avx2()) ? b : nullptr;
}

const Backend* lookup(std::string_view name) {
  if (name == "scalar") return &detail::scalar_backend();
  if (name == "avx2") return avx2_if_usable();
  return nullptr;
}

const Backend* initial_backend() {
  if (const char* env = std::getenv("HYBUSE_KERNELS")) {
    if (const Backend* b = lookup(env)) return b;
  }
  if (const Backend* b = avx2_if_usable()) return b;
  return &detail::scalar_backend();
}

const Backend*& active() {
  static const Backend* current = initial_backend();
  return current;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  return active()->dot(a, b, n);
}

double squared_norm(const double* a, std::size_t n) {
  return active()->squared_norm(a, n);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  return active()->squared_distance(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active()->axpy(alpha, x, y, n);
}

void scale(double alpha, double* x, std::size_t n) {
  active()->scale(alpha, x, n);
}

void matvec(const double* w, std::size_t rows, std::size_t cols,
            const double* x, const double* bias, double* out) {
  active()->matvec(w, rows, cols, x, bias, out);
}

void matvec_transposed(const double* w, std::size_t rows, std::size_t cols,
                       const double* v, double* out) {
  active()->matvec_transposed(w, rows, cols, v, out);
}

void outer_acc(double* w, std::size_t rows, std::size_t cols, const double* u,
               const double* v) {
  active()->outer_acc(w, rows, cols, u, v);
}

void relu(const double* x, double* out, std::size_t n) {
  active()->relu(x, out, n);
}

void relu_backward(const double* pre, double* grad, std::size_t n) {
  active()->relu_backward(pre, grad, n);
}

const char* backend_name() { return active()->name; }

bool set_backend(std::string_view name) {
  if (const Backend* b = lookup(name)) {
    active() = b;
    return true;
  }
  return false;
}

std::vector<std::string> available_backends() {
  std::vector<std::string> names;
  if (avx2_if_usable()) names.push_back("avx2");
  names.push_back("scalar");
  return names;
}

}  // namespace hybuse::kernels
