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
 * @file    bigfloat.hpp
 * @brief   Thin RAII value type over an MPFR float, plus the handful of
 *          rational/float conversions the threshold code needs.
 */

#ifndef STEERSCOPE_BIGFLOAT_HPP
#define STEERSCOPE_BIGFLOAT_HPP

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

namespace steerscope {

class BigFloat {
public:
  explicit BigFloat(mpfr_prec_t prec = 128) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const BigFloat &o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat &&o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigFloat &operator=(BigFloat o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from_rational(const mpq_class &q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    BigFloat f(prec);
    mpfr_set_q(f.v_, q.get_mpq_t(), rnd);
    return f;
  }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits = 17) const {
    const int len = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, v_);
    std::vector<char> buf(static_cast<std::size_t>(len) + 1);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
    return std::string(buf.data(), static_cast<std::size_t>(len));
  }

  /// -1, 0, +1 for this <, ==, > q. Exact.
  int compare(const mpq_class &q) const { return mpfr_cmp_q(v_, q.get_mpq_t()); }

private:
  mpfr_t v_;
};

/// 17 significant digits; round-trips any double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::size_t bit_length(const mpz_class &n) { return mpz_sizeinbase(n.get_mpz_t(), 2); }

inline mpz_class ipow(std::uint64_t base, unsigned exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

inline mpq_class qpow(const mpq_class &x, unsigned exp) {
  mpq_class r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), exp);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), exp);
  r.canonicalize();
  return r;
}

/// Parses "p/q", an integer, or a decimal/scientific literal. Decimal input
/// is converted through double (exact for the binary value it denotes).
inline mpq_class parse_rational(const std::string &s) {
  if (s.find('/') != std::string::npos) {
    mpq_class q(s, 10);
    if (q.get_den() == 0)
      throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  const double x = std::stod(s, &pos);
  if (pos != s.size())
    throw std::invalid_argument("trailing characters in number '" + s + "'");
  return mpq_class(x);
}

} // namespace steerscope

#endif // STEERSCOPE_BIGFLOAT_HPP
