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

// Independent reference computations for the test suites. Nothing here calls
// into the code path it is used to check.

#ifndef STEERSCOPE_TESTS_ORACLES_HPP
#define STEERSCOPE_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

namespace oracle {

using Mat = Eigen::MatrixXcd;

/// sum_{i=1}^n 1/i, one fraction at a time.
inline mpq_class harmonic(unsigned long n) {
  mpq_class h = 0;
  for (unsigned long i = 1; i <= n; ++i)
    h += mpq_class(1, i);
  return h;
}

/// [(1 + d) H_d - d] / d^2, straight from the definition.
inline mpq_class f_proj(unsigned long d) {
  mpq_class v = (mpq_class(d + 1) * harmonic(d) - mpq_class(d)) / mpq_class(d * d);
  v.canonicalize();
  return v;
}

inline mpq_class power(const mpq_class &x, unsigned k) {
  mpq_class r = 1;
  for (unsigned i = 0; i < k; ++i)
    r *= x;
  return r;
}

/// Partial transpose on B of a dA*dB square matrix.
inline Mat partial_transpose_B(const Mat &m, int dA, int dB) {
  Mat out(m.rows(), m.cols());
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dB; ++j)
      for (int k = 0; k < dA; ++k)
        for (int l = 0; l < dB; ++l)
          out(i * dB + j, k * dB + l) = m(i * dB + l, k * dB + j);
  return out;
}

inline double min_eigenvalue(const Mat &h) {
  Eigen::SelfAdjointEigenSolver<Mat> s(0.5 * (h + h.adjoint()));
  return s.eigenvalues()(0);
}

/// Tr_A computed index by index.
inline Mat reduced_B(const Mat &m, int dA, int dB) {
  Mat out = Mat::Zero(dB, dB);
  for (int j = 0; j < dB; ++j)
    for (int l = 0; l < dB; ++l)
      for (int i = 0; i < dA; ++i)
        out(j, l) += m(i * dB + j, i * dB + l);
  return out;
}

/// Binary entropy plus the white-noise share, the entropy of ISO_2(F).
inline double iso2_entropy(double F) {
  double s = 0.0;
  if (F > 0.0)
    s -= F * std::log2(F);
  const double q = (1.0 - F) / 3.0;
  if (q > 0.0)
    s -= 3.0 * q * std::log2(q);
  return s;
}

/// Overlap |<phi+| (I x V) ... > maximized by crude random search plus
/// coordinate perturbation over unitaries V = exp(iH). Slow and approximate,
/// used only as an upper/lower sanity bound.
inline double fraction_random_search(const Mat &rho, int d, unsigned samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto value = [&](const Mat &v) {
    Eigen::VectorXcd x(d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        x(i * d + j) = v(j, i) / std::sqrt(double(d));
    return (x.adjoint() * rho * x)(0, 0).real();
  };
  auto random_unitary = [&](double scale) {
    Mat h(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        h(i, j) = std::complex<double>(normal(rng), normal(rng)) * scale;
    h = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> s(h);
    Mat e = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
      e(i, i) = std::exp(std::complex<double>(0.0, s.eigenvalues()(i)));
    return Mat(s.eigenvectors() * e * s.eigenvectors().adjoint());
  };
  Mat best = Mat::Identity(d, d);
  double best_v = value(best);
  for (unsigned i = 0; i < samples; ++i) {
    const Mat cand = random_unitary(3.0);
    const double v = value(cand);
    if (v > best_v) {
      best_v = v;
      best = cand;
    }
  }
  for (double scale = 0.3; scale > 1e-6; scale *= 0.7)
    for (unsigned i = 0; i < 200; ++i) {
      const Mat cand = random_unitary(scale) * best;
      const double v = value(cand);
      if (v > best_v) {
        best_v = v;
        best = cand;
      }
    }
  return best_v;
}

} // namespace oracle

#endif // STEERSCOPE_TESTS_ORACLES_HPP
