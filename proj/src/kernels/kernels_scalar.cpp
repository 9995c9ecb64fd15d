#include <cstddef>

#include "backend.hpp"

// Reference implementations.  Plain sequential loops with left-to-right
// accumulation; these define the semantics the vector backends are tested
// against.

namespace hybuse::kernels::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void matvec(const double* w, std::size_t rows, std::size_t cols,
            const double* x, const double* bias, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    double s = bias ? bias[r] : 0.0;
    const double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) s += row[c] * x[c];
    out[r] = s;
  }
}

void matvec_transposed(const double* w, std::size_t rows, std::size_t cols,
                       const double* v, double* out) {
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    const double vr = v[r];
    for (std::size_t c = 0; c < cols; ++c) out[c] += vr * row[c];
  }
}

void outer_acc(double* w, std::size_t rows, std::size_t cols, const double* u,
               const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = w + r * cols;
    const double ur = u[r];
    for (std::size_t c = 0; c < cols; ++c) row[c] += ur * v[c];
  }
}

void relu(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* pre, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend table = {
      "scalar",     dot,   squared_norm,      squared_distance,
      axpy,         scale, matvec,            matvec_transposed,
      outer_acc,    relu,  relu_backward,
  };
  return table;
}

}  // namespace hybuse::kernels::detail
