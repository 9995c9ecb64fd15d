#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Dense double-precision primitives used by the geometry and training code.
//
// Every operation has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant.  The backend is chosen once at startup: AVX2 when the CPU
// supports it, scalar otherwise.  The HYBUSE_KERNELS environment variable
// ("scalar" or "avx2") or set_backend() overrides the choice; tests use this
// to compare the two implementations on identical inputs.
//
// All functions are deterministic for a fixed backend: accumulation order is
// fixed, so repeated calls on the same data give bitwise-identical results.

namespace hybuse::kernels {

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i]^2
double squared_norm(const double* a, std::size_t n);

// sum_i (a[i]-b[i])^2
double squared_distance(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// x[i] *= alpha
void scale(double alpha, double* x, std::size_t n);

// out = W x + bias, with W row-major rows x cols; bias may be null.
void matvec(const double* w, std::size_t rows, std::size_t cols,
            const double* x, const double* bias, double* out);

// out = W^T v, with W row-major rows x cols; out has cols entries.
void matvec_transposed(const double* w, std::size_t rows, std::size_t cols,
                       const double* v, double* out);

// W += u v^T, with W row-major rows x cols, u rows entries, v cols entries.
void outer_acc(double* w, std::size_t rows, std::size_t cols, const double* u,
               const double* v);

// out[i] = max(x[i], 0); in-place allowed (out == x).
void relu(const double* x, double* out, std::size_t n);

// grad[i] = pre[i] > 0 ? grad[i] : 0  (backward pass of relu)
void relu_backward(const double* pre, double* grad, std::size_t n);

// Name of the active backend ("scalar" or "avx2").
const char* backend_name();

// Force a backend by name; returns false (and leaves the active backend
// unchanged) when the request is unknown or unsupported on this machine.
// Not thread-safe; intended for tests and startup configuration.
bool set_backend(std::string_view name);

// Backends usable on this machine, in preference order.
std::vector<std::string> available_backends();

}  // namespace hybuse::kernels
