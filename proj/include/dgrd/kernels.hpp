// SPDX-License-Identifier: Apache-2.0
//
// Inner-loop arithmetic kernels shared by the assembly and norm modules.
//
// Every kernel exists in a scalar reference form (strict left-to-right
// accumulation, no FMA contraction) and, on x86-64, an AVX2+FMA form.
// The active variant is selected once at runtime from CPU capabilities
// and can be pinned through set_backend(); the two variants agree to
// vector-width rounding and are equivalence-tested against each other.
#pragma once

#include <cstddef>
#include <string>

namespace dgrd::kernels {

enum class Backend { Auto, Scalar, Avx2 };

/// Pin the kernel backend for the whole process. Auto re-runs CPU
/// detection. Throws invalid_input if the requested backend is not
/// supported on this machine.
void set_backend(Backend b);
Backend active_backend();
std::string backend_name();
bool avx2_available();

/// y[k] += a * x[k]
void axpy(double a, const double* x, double* y, std::size_t n);
/// sum_k a[k] * b[k]
double dot(const double* a, const double* b, std::size_t n);
/// sum_k w[k] * a[k] * b[k]  (weighted quadrature products)
double dot3(const double* w, const double* a, const double* b, std::size_t n);

// Reference implementations, always available; these define the scalar
// semantics the dispatched variants are tested against.
namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* w, const double* a, const double* b, std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* w, const double* a, const double* b, std::size_t n);
} // namespace avx2
#endif

} // namespace dgrd::kernels
