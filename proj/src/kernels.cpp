// SPDX-License-Identifier: Apache-2.0
#include "dgrd/kernels.hpp"

#include "dgrd/common.hpp"

namespace dgrd::kernels {

namespace scalar {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double dot3(const double* w, const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += w[k] * (a[k] * b[k]);
  return s;
}

} // namespace scalar

namespace {

struct Vtable {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
};

constexpr Vtable kScalar{&scalar::axpy, &scalar::dot, &scalar::dot3};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Vtable kAvx2{&avx2::axpy, &avx2::dot, &avx2::dot3};
#endif

Backend g_backend = Backend::Auto;
const Vtable* g_vt = nullptr;

const Vtable* pick(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &kScalar;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      if (avx2_available()) return &kAvx2;
#endif
      throw invalid_input("kernels: AVX2 backend requested but not supported on this CPU");
    case Backend::Auto:
    default:
#if defined(__x86_64__) || defined(_M_X64)
      if (avx2_available()) return &kAvx2;
#endif
      return &kScalar;
  }
}

const Vtable* vt() {
  if (!g_vt) g_vt = pick(g_backend);
  return g_vt;
}

} // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void set_backend(Backend b) {
  g_vt = pick(b);
  g_backend = b;
}

Backend active_backend() {
  const Vtable* v = vt();
  return v == &kScalar ? Backend::Scalar : Backend::Avx2;
}

std::string backend_name() {
  return active_backend() == Backend::Scalar ? "scalar" : "avx2";
}

void axpy(double a, const double* x, double* y, std::size_t n) { vt()->axpy(a, x, y, n); }
double dot(const double* a, const double* b, std::size_t n) { return vt()->dot(a, b, n); }
double dot3(const double* w, const double* a, const double* b, std::size_t n) {
  return vt()->dot3(w, a, b, n);
}

} // namespace dgrd::kernels
