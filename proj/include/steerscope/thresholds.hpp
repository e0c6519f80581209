/*
Copyright 2026 The steerscope Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

/**
 * @file    thresholds.hpp
 * @brief   Harmonic numbers and the isotropic-state steering thresholds, in
 *          exact rationals where feasible and certified enclosures otherwise.
 *
 * Harmonic numbers H_n with n <= exact_limit (default 10^4) are exact
 * rationals. Above that, H_n is enclosed with the Euler-Maclaurin expansion
 *
 *     H_n = ln n + gamma + 1/(2n) - sum_{j=1..m} B_{2j} / (2j n^{2j}) + R_m,
 *
 * whose remainder R_m has the sign of, and is bounded by, the first omitted
 * term. All floating steps use directed rounding, so [lower, upper] is a
 * rigorous enclosure. m = 1 gives the familiar 1/(120 n^4) bound.
 *
 * Comparisons against a certified value are decided only when the rational
 * side lies outside the enclosure; otherwise the working precision and the
 * number of expansion terms are raised until it does, up to a ceiling
 * (STEERSCOPE_PRECISION, in bits).
 */

#ifndef STEERSCOPE_THRESHOLDS_HPP
#define STEERSCOPE_THRESHOLDS_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bigfloat.hpp"

namespace steerscope {

enum class Representation { ExactRational, CertifiedFloat };

/// Which k-copy threshold is used.
///   Proof:     the projective bound evaluated at dimension d^k,
///              [(1 + n) H_n - n] / n^2 with n = d^k.
///   AsPrinted: [(1 + n)(H_n - 1) - n] / n^2, the form stated alongside the
///              criterion. It is smaller by (1 + n)/n^2.
enum class KCopyForm { Proof, AsPrinted };

/// POVM single-copy LHS bound.
///   Converted: 1/d^2 + eta (1 - 1/d^2), eta = (3d-1)(d-1)^{d-1} / ((d+1) d^d),
///              the visibility bound rewritten as an entanglement fraction.
///   AsPrinted: [1 + ((d+1)/d)^d (3d - 1)] / d^2, which exceeds 1 at d = 2.
enum class PovmForm { Converted, AsPrinted };

inline const char *to_string(Representation r) {
  return r == Representation::ExactRational ? "exact-rational" : "certified-float";
}
inline const char *to_string(KCopyForm f) { return f == KCopyForm::Proof ? "proof" : "printed-eq10"; }
inline const char *to_string(PovmForm f) { return f == PovmForm::Converted ? "converted" : "printed-eq16"; }

class PrecisionExhausted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Ceiling on working precision in bits; STEERSCOPE_PRECISION overrides.
inline mpfr_prec_t default_precision_ceiling() {
  constexpr mpfr_prec_t fallback = 1 << 15;
  if (const char *env = std::getenv("STEERSCOPE_PRECISION")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 64)
      return static_cast<mpfr_prec_t>(std::min<long>(v, MPFR_PREC_MAX / 2));
  }
  return fallback;
}

struct CertifyOptions {
  mpfr_prec_t precision = 128;  ///< minimum working precision; raised to fit n exactly
  unsigned expansion_terms = 1; ///< Euler-Maclaurin Bernoulli terms, 1..10
  mpfr_prec_t ceiling = default_precision_ceiling();
  std::uint64_t exact_limit = 10000; ///< largest n evaluated exactly

  CertifyOptions escalated() const {
    CertifyOptions next = *this;
    next.precision *= 2;
    next.expansion_terms = std::min(expansion_terms + 1, 10u);
    return next;
  }
};

/// A threshold number. Exact values carry `exact`; certified ones carry an
/// enclosure [lower, upper] around `value` with
/// |true - value| <= error_bound. Exact values also fill value/lower/upper
/// by rounding, and have error_bound 0.
struct ThresholdValue {
  Representation representation = Representation::ExactRational;
  mpq_class exact;
  BigFloat value;
  BigFloat lower;
  BigFloat upper;
  double error_bound = 0.0;
  std::string note;

  bool is_exact() const noexcept { return representation == Representation::ExactRational; }
  double approx() const { return is_exact() ? exact.get_d() : value.to_double(); }
  std::string exact_string() const { return is_exact() ? exact.get_str() : std::string(); }
  /// 17 significant digits.
  std::string decimal() const { return format_double(approx()); }

  static ThresholdValue from_exact(mpq_class q, mpfr_prec_t prec = 128) {
    ThresholdValue t;
    t.representation = Representation::ExactRational;
    t.value = BigFloat::from_rational(q, prec, MPFR_RNDN);
    t.lower = BigFloat::from_rational(q, prec, MPFR_RNDD);
    t.upper = BigFloat::from_rational(q, prec, MPFR_RNDU);
    t.exact = std::move(q);
    return t;
  }

  static ThresholdValue from_enclosure(BigFloat lo, BigFloat hi) {
    ThresholdValue t;
    t.representation = Representation::CertifiedFloat;
    const mpfr_prec_t p = std::max(lo.precision(), hi.precision());
    BigFloat mid(p);
    mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    BigFloat a(p), b(p);
    mpfr_sub(a.get(), mid.get(), lo.get(), MPFR_RNDU);
    mpfr_sub(b.get(), hi.get(), mid.get(), MPFR_RNDU);
    mpfr_max(a.get(), a.get(), b.get(), MPFR_RNDU);
    t.error_bound = mpfr_get_d(a.get(), MPFR_RNDU);
    t.value = std::move(mid);
    t.lower = std::move(lo);
    t.upper = std::move(hi);
    return t;
  }

  /// +1 if q > this holds for every value in the enclosure, -1 if q <= this
  /// does, 0 if the enclosure straddles q.
  int compare_rational(const mpq_class &q) const {
    if (is_exact())
      return q > exact ? +1 : -1;
    if (upper.compare(q) < 0)
      return +1;
    if (lower.compare(q) >= 0)
      return -1;
    return 0;
  }
};

//============================================================================
// Harmonic numbers
//============================================================================

namespace detail {

// sum_{i=a}^{b-1} 1/i as num/den, no reduction until the end.
inline void harmonic_split(unsigned long a, unsigned long b, mpz_class &num, mpz_class &den) {
  if (b - a == 1) {
    num = 1;
    den = a;
    return;
  }
  const unsigned long m = a + (b - a) / 2;
  mpz_class n1, d1, n2, d2;
  harmonic_split(a, m, n1, d1);
  harmonic_split(m, b, n2, d2);
  num = n1 * d2 + n2 * d1;
  den = d1 * d2;
}

/// B_2, B_4, ..., B_22.
inline const mpq_class &bernoulli_even(unsigned j) {
  static const mpq_class table[] = {
      mpq_class(1, 6),          mpq_class(-1, 30),     mpq_class(1, 42),
      mpq_class(-1, 30),        mpq_class(5, 66),      mpq_class(-691, 2730),
      mpq_class(7, 6),          mpq_class(-3617, 510), mpq_class(43867, 798),
      mpq_class(-174611, 330),  mpq_class(854513, 138)};
  if (j < 1 || j > 11)
    throw std::out_of_range("bernoulli_even: index out of range");
  return table[j - 1];
}

/// -B_{2j} / (2j n^{2j})
inline mpq_class em_term(unsigned j, const mpz_class &n) {
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), n.get_mpz_t(), 2 * j);
  mpq_class t = -bernoulli_even(j) / mpq_class(mpz_class(2 * j) * p);
  t.canonicalize();
  return t;
}

struct HarmonicEnclosure {
  BigFloat lo;
  BigFloat hi;
};

inline HarmonicEnclosure harmonic_enclosure(const mpz_class &n, mpfr_prec_t prec, unsigned terms) {
  terms = std::clamp(terms, 1u, 10u);
  prec = std::max<mpfr_prec_t>(prec, static_cast<mpfr_prec_t>(bit_length(n)) + 64);

  // Rational part: 1/(2n) + sum_j terms, plus the remainder bracket.
  mpq_class rational(mpz_class(1), mpz_class(2 * n));
  rational.canonicalize();
  for (unsigned j = 1; j <= terms; ++j)
    rational += em_term(j, n);
  const mpq_class omitted = em_term(terms + 1, n);
  const mpq_class rational_lo = rational + (omitted < 0 ? omitted : mpq_class(0));
  const mpq_class rational_hi = rational + (omitted > 0 ? omitted : mpq_class(0));

  BigFloat nf(prec);
  mpfr_set_z(nf.get(), n.get_mpz_t(), MPFR_RNDN); // exact: prec > bit_length(n)

  auto bound = [&](mpfr_rnd_t rnd, const mpq_class &tail) {
    BigFloat acc(prec), tmp(prec);
    mpfr_log(acc.get(), nf.get(), rnd);
    mpfr_const_euler(tmp.get(), rnd);
    mpfr_add(acc.get(), acc.get(), tmp.get(), rnd);
    mpfr_add_q(acc.get(), acc.get(), tail.get_mpq_t(), rnd);
    return acc;
  };
  return {bound(MPFR_RNDD, rational_lo), bound(MPFR_RNDU, rational_hi)};
}

} // namespace detail

/// H_n as an exact rational.
inline mpq_class harmonic_exact(unsigned long n) {
  if (n == 0)
    return mpq_class(0);
  mpz_class num, den;
  detail::harmonic_split(1, n + 1, num, den);
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

/// H_n as a certified enclosure regardless of size (used for cross-checks).
inline ThresholdValue harmonic_certified(const mpz_class &n, const CertifyOptions &opts = {}) {
  if (n < 1)
    throw std::invalid_argument("harmonic: n must be >= 1");
  auto enc = detail::harmonic_enclosure(n, opts.precision, opts.expansion_terms);
  return ThresholdValue::from_enclosure(std::move(enc.lo), std::move(enc.hi));
}

/// H_n, exact for n <= opts.exact_limit.
inline ThresholdValue harmonic(const mpz_class &n, const CertifyOptions &opts = {}) {
  if (n < 1)
    throw std::invalid_argument("harmonic: n must be >= 1");
  if (n <= opts.exact_limit)
    return ThresholdValue::from_exact(harmonic_exact(n.get_ui()));
  return harmonic_certified(n, opts);
}

//============================================================================
// Isotropic-state thresholds
//============================================================================

namespace detail {

inline mpq_class projective_formula(const mpz_class &n, const mpq_class &h, KCopyForm form) {
  const mpq_class hh = form == KCopyForm::Proof ? h : h - 1;
  mpq_class t = (mpq_class(n + 1) * hh - mpq_class(n)) / mpq_class(n * n);
  t.canonicalize();
  return t;
}

} // namespace detail

/// Projective-measurement threshold of ISO_n evaluated at dimension n:
/// Proof form [(1+n) H_n - n] / n^2, or the AsPrinted variant. Both are
/// increasing in H_n, so an enclosure of H_n maps to one of the threshold.
inline ThresholdValue projective_threshold_at(const mpz_class &n, KCopyForm form = KCopyForm::Proof,
                                              const CertifyOptions &opts = {}) {
  if (n < 1)
    throw std::invalid_argument("projective threshold: dimension must be >= 1");
  if (n <= opts.exact_limit)
    return ThresholdValue::from_exact(detail::projective_formula(n, harmonic_exact(n.get_ui()), form));

  const auto enc = detail::harmonic_enclosure(n, opts.precision, opts.expansion_terms);
  const mpz_class n1 = n + 1;
  const mpz_class n2 = n * n;
  auto map = [&](const BigFloat &h, mpfr_rnd_t rnd) {
    BigFloat t(h.precision());
    if (form == KCopyForm::Proof)
      mpfr_set(t.get(), h.get(), rnd);
    else
      mpfr_sub_ui(t.get(), h.get(), 1, rnd);
    mpfr_mul_z(t.get(), t.get(), n1.get_mpz_t(), rnd);
    mpfr_sub_z(t.get(), t.get(), n.get_mpz_t(), rnd);
    mpfr_div_z(t.get(), t.get(), n2.get_mpz_t(), rnd);
    return t;
  };
  return ThresholdValue::from_enclosure(map(enc.lo, MPFR_RNDD), map(enc.hi, MPFR_RNDU));
}

/// Largest F for which ISO_d(F) admits an LHS model for all projective
/// measurements: [(1 + d) H_d - d] / d^2.
inline ThresholdValue projective_lhs_threshold(std::uint64_t d, const CertifyOptions &opts = {}) {
  if (d < 2)
    throw std::invalid_argument("projective_lhs_threshold: d must be >= 2");
  return projective_threshold_at(mpz_class(static_cast<unsigned long>(d)), KCopyForm::Proof, opts);
}

/// Sufficient single-copy LHS bound on F for all POVMs. Always exact.
inline ThresholdValue povm_lhs_threshold(std::uint64_t d, PovmForm form = PovmForm::Converted) {
  if (d < 2)
    throw std::invalid_argument("povm_lhs_threshold: d must be >= 2");
  const auto ud = static_cast<unsigned long>(d);
  const unsigned e = static_cast<unsigned>(d);
  const mpq_class inv_d2(mpz_class(1), mpz_class(ud) * ud);
  ThresholdValue t;
  if (form == PovmForm::Converted) {
    mpq_class eta(mpz_class(3 * ud - 1) * ipow(ud - 1, e - 1), mpz_class(ud + 1) * ipow(ud, e));
    eta.canonicalize();
    mpq_class f = inv_d2 + eta * (1 - inv_d2);
    f.canonicalize();
    t = ThresholdValue::from_exact(std::move(f));
  } else {
    mpq_class ratio(ipow(ud + 1, e), ipow(ud, e));
    ratio.canonicalize();
    mpq_class f = (1 + ratio * (3 * ud - 1)) * inv_d2;
    f.canonicalize();
    t = ThresholdValue::from_exact(std::move(f));
    if (t.exact > 1)
      t.note = "as-printed POVM bound exceeds 1 at d=" + std::to_string(d) +
               " and cannot be an entanglement-fraction bound";
  }
  return t;
}

/// Right-hand side of the k-copy steerability condition F^k > T(d, k).
inline ThresholdValue kcopy_threshold(std::uint64_t d, unsigned k, KCopyForm form = KCopyForm::Proof,
                                      const CertifyOptions &opts = {}) {
  if (d < 2)
    throw std::invalid_argument("kcopy_threshold: d must be >= 2");
  if (k < 1)
    throw std::invalid_argument("kcopy_threshold: k must be >= 1");
  return projective_threshold_at(ipow(d, k), form, opts);
}

//============================================================================
// Certified comparison
//============================================================================

/// Decides q > T where `make(opts)` produces T, escalating precision while the
/// enclosure straddles q. Throws PrecisionExhausted past opts.ceiling.
template <class MakeThreshold>
bool strictly_exceeds(const mpq_class &q, MakeThreshold &&make, CertifyOptions opts = {}) {
  for (;;) {
    const ThresholdValue t = make(opts);
    if (t.is_exact())
      return q > t.exact;
    const int c = t.compare_rational(q);
    if (c != 0)
      return c > 0;
    if (opts.precision * 2 > opts.ceiling)
      throw PrecisionExhausted("comparison undecided at " + std::to_string(opts.precision) +
                               " bits; raise STEERSCOPE_PRECISION");
    opts = opts.escalated();
  }
}

} // namespace steerscope

#endif // STEERSCOPE_THRESHOLDS_HPP
