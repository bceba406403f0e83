// SPDX-License-Identifier: Apache-2.0

#include "dgrd/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <random>

#include "dgrd/common.hpp"

namespace dgrd {

const char* const kXi1DiscrepancyNote =
    "xi1(|beta|=0.4, flat exponents) = sqrt(2.28) = sqrt(228)/10; the "
    "companion closed-form value sqrt(288)/10 is inconsistent with the xi1 "
    "formula and is flagged as a suspected typo for sqrt(228)/10";

namespace {

// ---------------------------------------------------------------------------
// Exact rational scalar (128-bit) used to evaluate the closed-form constant
// formulas without binary-decimal noise. Any overflow or irrational input
// drops the rational channel and the double value is used instead.
// ---------------------------------------------------------------------------

using Int = __int128;

Int int_abs(Int v) { return v < 0 ? -v : v; }

Int int_gcd(Int a, Int b) {
  a = int_abs(a);
  b = int_abs(b);
  while (b != 0) {
    const Int t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

constexpr double kRatLimit = 9.2e18; // keep products inside __int128

struct Rat {
  Int num = 0;
  Int den = 1;

  static std::optional<Rat> make(Int n, Int d) {
    if (d == 0) {
      return std::nullopt;
    }
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const Int g = int_gcd(n, d);
    n /= g;
    d /= g;
    if (static_cast<double>(int_abs(n)) > kRatLimit ||
        static_cast<double>(d) > kRatLimit) {
      return std::nullopt;
    }
    return Rat{n, d};
  }
  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

std::optional<Rat> rat_add(const Rat& a, const Rat& b) {
  return Rat::make(a.num * b.den + b.num * a.den, a.den * b.den);
}
std::optional<Rat> rat_sub(const Rat& a, const Rat& b) {
  return Rat::make(a.num * b.den - b.num * a.den, a.den * b.den);
}
std::optional<Rat> rat_mul(const Rat& a, const Rat& b) {
  return Rat::make(a.num * b.num, a.den * b.den);
}
std::optional<Rat> rat_div(const Rat& a, const Rat& b) {
  if (b.num == 0) {
    return std::nullopt;
  }
  return Rat::make(a.num * b.den, a.den * b.num);
}
// a < b, exact (safe: operands already bounded by kRatLimit)
bool rat_less(const Rat& a, const Rat& b) {
  return a.num * b.den < b.num * a.den;
}

// Exact rational value of a double's shortest round-trip decimal form;
// recovers the decimal the user wrote (0.4 -> 2/5) when one exists.
std::optional<Rat> rat_from_double(double x) {
  if (!std::isfinite(x)) {
    return std::nullopt;
  }
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) {
      break;
    }
  }
  if (std::strchr(buf, 'n') != nullptr || std::strchr(buf, 'i') != nullptr) {
    return std::nullopt;
  }
  const char* s = buf;
  bool neg = false;
  if (*s == '-') {
    neg = true;
    ++s;
  }
  Int mant = 0;
  int frac_digits = 0, exp10 = 0;
  bool in_frac = false;
  for (; *s != '\0'; ++s) {
    if (*s == '.') {
      in_frac = true;
    } else if (*s == 'e' || *s == 'E') {
      exp10 = std::atoi(s + 1);
      break;
    } else {
      mant = mant * 10 + (*s - '0');
      if (in_frac) {
        ++frac_digits;
      }
    }
  }
  Int num = neg ? -mant : mant;
  Int den = 1;
  int net = exp10 - frac_digits;
  for (; net > 0; --net) {
    num *= 10;
    if (static_cast<double>(int_abs(num)) > kRatLimit) {
      return std::nullopt;
    }
  }
  for (; net < 0; ++net) {
    den *= 10;
    if (static_cast<double>(den) > kRatLimit) {
      return std::nullopt;
    }
  }
  return Rat::make(num, den);
}

// A scalar carried through the formulas in both channels at once.
struct Val {
  double d = 0.0;
  std::optional<Rat> r;

  static Val from_double(double x) { return {x, rat_from_double(x)}; }
  static Val from_int(long long x) {
    return {static_cast<double>(x), Rat::make(x, 1)};
  }
  double value() const { return r ? r->to_double() : d; }
};

template <class Op>
Val combine(const Val& a, const Val& b, double dres, Op op) {
  Val out;
  out.d = dres;
  if (a.r && b.r) {
    out.r = op(*a.r, *b.r);
  }
  return out;
}
Val operator+(const Val& a, const Val& b) {
  return combine(a, b, a.d + b.d, rat_add);
}
Val operator-(const Val& a, const Val& b) {
  return combine(a, b, a.d - b.d, rat_sub);
}
Val operator*(const Val& a, const Val& b) {
  return combine(a, b, a.d * b.d, rat_mul);
}
Val operator/(const Val& a, const Val& b) {
  return combine(a, b, a.d / b.d, rat_div);
}

bool val_less(const Val& a, const Val& b) {
  if (a.r && b.r) {
    return rat_less(*a.r, *b.r);
  }
  return a.value() < b.value();
}
Val val_min(const Val& a, const Val& b) { return val_less(b, a) ? b : a; }
Val val_max(const Val& a, const Val& b) { return val_less(a, b) ? b : a; }

// base^e with rational channel for small integer exponents (covers the
// flat and linear exponent configurations exactly).
Val val_pow(const Val& base, double e) {
  Val out;
  out.d = std::pow(base.d, e);
  if (e >= 0.0 && e <= 8.0 && e == std::floor(e) && base.r) {
    Rat acc{1, 1};
    std::optional<Rat> cur = base.r;
    bool ok = true;
    for (int k = 0; k < static_cast<int>(e); ++k) {
      const std::optional<Rat> next = rat_mul(acc, *cur);
      if (!next) {
        ok = false;
        break;
      }
      acc = *next;
    }
    if (ok) {
      out.r = acc;
    }
  }
  return out;
}

} // namespace

TheoryConstants theory_constants(const PenaltyParams& params, double h, int p,
                                 double beta, double c) {
  params.validate();
  TheoryConstants out;
  out.beta = beta;
  out.c = c;
  out.beta_negative = beta < 0.0;
  out.note = kXi1DiscrepancyNote;

  const Val one = Val::from_int(1);
  const Val b = Val::from_double(std::abs(beta));
  const Val cc = Val::from_double(c);
  const Val sigma = Val::from_double(params.sigma);
  const Val hh = Val::from_double(h);
  const Val pp = Val::from_int(p);

  // X = p^theta / h^nu, Y = p^zeta / h^lambda
  const Val x = val_pow(pp, params.theta) / val_pow(hh, params.nu);
  const Val y = val_pow(pp, params.zeta) / val_pow(hh, params.lambda);

  const Val m = val_max(
      Val::from_int(3),
      val_max(cc * x, cc * y / (Val::from_int(4) * sigma) + one));
  out.m = m.value();

  const Val xi1sq =
      val_max(Val::from_int(2),
              (one + b) * (one + b) + Val::from_int(2) * b * b * x);
  out.xi1 = std::sqrt(xi1sq.value());

  const Val t1 = one - Val::from_double(2.25) * b;
  const Val t2 = b * x / Val::from_int(4);
  const Val t3 = one - b - b * y / sigma;
  const Val xi2 = val_min(t1, val_min(t2, t3));
  out.xi2 = xi2.value();
  out.xi2_positive = xi2.r ? (xi2.r->num > 0) : (out.xi2 > 0.0);
  out.gamma_lb = out.xi2 / out.xi1;
  return out;
}

DGFunction build_uhat(const DGFunction& u, const CoefficientField& K,
                      double beta) {
  const BrokenSpace& space = *u.space;
  DGFunction uhat(space, Eigen::VectorXd(u.coeffs));
  if (beta == 0.0) {
    return uhat;
  }
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    const LocalLifting lift = local_lifting(u, K, e);
    uhat.coeffs.segment(space.offset(e), space.block_size(e)) += beta * lift.z;
  }
  return uhat;
}

MeasuredConstants measure_constants(const SparseMat& b,
                                    const Eigen::MatrixXd& g,
                                    std::uint64_t fingerprint) {
  const int n = static_cast<int>(b.rows());
  if (n > 3000) {
    throw invalid_input(
        "measure_constants: dense spectral path is guarded to 3000 DOFs "
        "(got " +
        std::to_string(n) + ")");
  }
  if (g.rows() != n || g.cols() != n) {
    throw invalid_input("measure_constants: B/G dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw internal_error("measure_constants: Gram matrix not SPD");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd bd(b);
  // S = L^{-1} B L^{-T} via two triangular solves.
  const Eigen::MatrixXd y =
      l.triangularView<Eigen::Lower>().solve(bd);
  const Eigen::MatrixXd s =
      l.triangularView<Eigen::Lower>().solve(y.transpose()).transpose();
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(s);
  MeasuredConstants out;
  out.dofs = n;
  out.fingerprint = fingerprint;
  out.m_h = svd.singularValues()(0);
  out.gamma_h = svd.singularValues()(n - 1);
  return out;
}

LemmaReport lemma_check(const BrokenSpace& space, const CoefficientField& K,
                        const PenaltyParams& params, double beta,
                        int n_samples, std::uint64_t seed) {
  params.validate();
  if (n_samples < 1) {
    throw invalid_input("lemma_check: need at least one sample");
  }
  const SparseMat b = assemble_direct(space, K, params);
  LemmaReport rep;
  rep.theory = theory_constants(params, space.mesh().h, space.min_degree(),
                                beta, continuity_c(K));
  rep.seed = seed;
  rep.samples.reserve(static_cast<std::size_t>(n_samples));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  rep.r1_max = 0.0;
  rep.r2_min = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    DGFunction u(space);
    for (Eigen::Index i = 0; i < u.coeffs.size(); ++i) {
      u.coeffs[i] = dist(rng);
    }
    const DGFunction uhat = build_uhat(u, K, beta);
    const double tn_u = triple_norm(u, K, params);
    const double tn_uhat = triple_norm(uhat, K, params);
    LemmaSample sample;
    sample.r1 = tn_uhat / tn_u;
    sample.r2 = uhat.coeffs.dot(b * u.coeffs) / (tn_u * tn_u);
    rep.r1_max = std::max(rep.r1_max, sample.r1);
    rep.r2_min = std::min(rep.r2_min, sample.r2);
    if (sample.r1 <= rep.theory.xi1 * (1.0 + 1e-9)) {
      ++rep.r1_within;
    }
    if (sample.r2 >= rep.theory.xi2 * (1.0 - 1e-9)) {
      ++rep.r2_within;
    }
    rep.samples.push_back(sample);
  }
  return rep;
}

} // namespace dgrd
