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
 * @file    states.hpp
 * @brief   Named state families (maximally entangled, isotropic, pure
 *          Schmidt) and seeded random states / unitaries.
 */

#ifndef STEERSCOPE_STATES_HPP
#define STEERSCOPE_STATES_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "linalg.hpp"

namespace steerscope {

/// (1/sqrt(d)) sum_i |ii>
inline PureState phi_plus(std::size_t d) {
  if (d < 2)
    throw std::invalid_argument("phi_plus: dimension must be >= 2, got " + std::to_string(d));
  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector v = ComplexVector::Zero(n * n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < n; ++i)
    v(i * n + i) = amp;
  return PureState(v);
}

/// <phi+_d| rho |phi+_d> for a d x d bipartite state.
inline double fidelity_phi_plus(const DensityMatrix &rho) {
  if (rho.dimA() != rho.dimB())
    throw DimensionMismatch("fidelity_phi_plus: requires dimA == dimB, got " +
                            std::to_string(rho.dimA()) + "x" + std::to_string(rho.dimB()));
  const auto n = static_cast<Eigen::Index>(rho.dimA());
  // Only the |ii><jj| block contributes.
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      acc += rho.matrix()(i * n + i, j * n + j);
  return acc.real() / static_cast<double>(n);
}

/// (d, F) label of an isotropic state.
struct IsotropicClass {
  std::size_t d = 2;
  double F = 0.0;

  DensityMatrix materialize() const;

  friend bool operator==(const IsotropicClass &, const IsotropicClass &) = default;
};

/// F |phi+><phi+| + (1 - F) (I - |phi+><phi+|) / (d^2 - 1)
inline DensityMatrix isotropic(std::size_t d, double F) {
  if (d < 2)
    throw std::invalid_argument("isotropic: dimension must be >= 2, got " + std::to_string(d));
  if (!(F >= 0.0 && F <= 1.0))
    detail::throw_violation("fraction in [0,1]", F < 0.0 ? -F : F - 1.0, "isotropic");
  const double n = static_cast<double>(d * d);
  const ComplexMatrix p = phi_plus(d).projector();
  const ComplexMatrix id = identity(d * d);
  ComplexMatrix m = F * p + ((1.0 - F) / (n - 1.0)) * (id - p);
  return DensityMatrix(d, d, hermitian_part(m));
}

inline DensityMatrix IsotropicClass::materialize() const { return isotropic(d, F); }

/// Projector onto sum_i c_i |ii>.
inline DensityMatrix pure_schmidt(std::span<const double> coeffs) {
  if (coeffs.empty())
    throw std::invalid_argument("pure_schmidt: empty coefficient list");
  double sq = 0.0;
  for (double c : coeffs) {
    if (!(c >= 0.0) || !std::isfinite(c))
      detail::throw_violation("nonnegative coefficients", c, "pure_schmidt");
    sq += c * c;
  }
  if (std::abs(sq - 1.0) > tol_norm)
    detail::throw_violation("unit squared sum", std::abs(sq - 1.0), "pure_schmidt");
  const auto d = static_cast<Eigen::Index>(coeffs.size());
  ComplexVector v = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    v(i * d + i) = coeffs[static_cast<std::size_t>(i)];
  v /= v.norm();
  return DensityMatrix(coeffs.size(), coeffs.size(), v * v.adjoint());
}

inline DensityMatrix pure_schmidt(std::initializer_list<double> coeffs) {
  return pure_schmidt(std::span<const double>(coeffs.begin(), coeffs.size()));
}

inline DensityMatrix product_state(const ComplexMatrix &sigmaA, const ComplexMatrix &sigmaB) {
  return DensityMatrix::from_unnormalized(static_cast<std::size_t>(sigmaA.rows()),
                                          static_cast<std::size_t>(sigmaB.rows()),
                                          tensor(sigmaA, sigmaB));
}

//============================================================================
// Random states
//============================================================================

namespace detail {

inline ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

} // namespace detail

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix,
/// with the phases of R's diagonal absorbed into Q.
inline ComplexMatrix random_unitary(std::size_t d, std::mt19937_64 &rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::HouseholderQR<ComplexMatrix> qr(detail::ginibre(n, n, rng));
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0)
      q.col(i) *= r(i, i) / a;
  }
  return q;
}

inline ComplexMatrix random_unitary(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unitary(d, rng);
}

/// G G^dagger / tr(G G^dagger) with G a seeded (dA*dB) x rank complex Ginibre
/// matrix. Deterministic in `seed`.
inline DensityMatrix random_density(std::size_t dA, std::size_t dB, std::size_t rank,
                                    std::uint64_t seed) {
  const std::size_t n = dA * dB;
  if (rank == 0 || rank > n)
    throw std::invalid_argument("random_density: rank must be in [1, " + std::to_string(n) +
                                "], got " + std::to_string(rank));
  std::mt19937_64 rng(seed);
  const ComplexMatrix g =
      detail::ginibre(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rank), rng);
  return DensityMatrix::from_unnormalized(dA, dB, g * g.adjoint());
}

inline PureState random_pure(std::size_t dim, std::mt19937_64 &rng) {
  return PureState::normalized(detail::ginibre(static_cast<Eigen::Index>(dim), 1, rng).col(0));
}

/// (U_A (x) U_B) rho (U_A (x) U_B)^dagger
inline DensityMatrix local_unitary_conjugate(const DensityMatrix &rho, const ComplexMatrix &uA,
                                             const ComplexMatrix &uB) {
  const ComplexMatrix u = tensor(uA, uB);
  return DensityMatrix::from_unnormalized(rho.dimA(), rho.dimB(), u * rho.matrix() * u.adjoint());
}

//============================================================================
// Copies
//============================================================================

/// rho^{(x)k} with all A factors first: basis ordering (A1 ... Ak | B1 ... Bk),
/// so the result is a d_A^k x d_B^k bipartite state.
inline DensityMatrix bipartite_tensor_power(const DensityMatrix &rho, unsigned k) {
  if (k == 0)
    throw std::invalid_argument("bipartite_tensor_power: k must be >= 1");
  ComplexMatrix raw = rho.matrix();
  for (unsigned c = 1; c < k; ++c)
    raw = tensor(raw, rho.matrix());

  const std::size_t dA = rho.dimA(), dB = rho.dimB();
  std::size_t DA = 1, DB = 1;
  for (unsigned c = 0; c < k; ++c) {
    DA *= dA;
    DB *= dB;
  }
  // perm[target] = source, where source digits are (a1 b1 a2 b2 ...) and
  // target digits are (a1 a2 ... b1 b2 ...).
  std::vector<Eigen::Index> perm(DA * DB);
  std::vector<std::size_t> a(k), b(k);
  for (std::size_t t = 0; t < DA * DB; ++t) {
    std::size_t ia = t / DB, ib = t % DB;
    for (unsigned c = k; c-- > 0;) {
      a[c] = ia % dA;
      ia /= dA;
      b[c] = ib % dB;
      ib /= dB;
    }
    std::size_t s = 0;
    for (unsigned c = 0; c < k; ++c)
      s = (s * dA + a[c]) * dB + b[c];
    perm[t] = static_cast<Eigen::Index>(s);
  }
  const auto N = static_cast<Eigen::Index>(DA * DB);
  ComplexMatrix out(N, N);
  for (Eigen::Index r = 0; r < N; ++r)
    for (Eigen::Index c = 0; c < N; ++c)
      out(r, c) = raw(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]);
  return DensityMatrix::from_unnormalized(DA, DB, out);
}

} // namespace steerscope

#endif // STEERSCOPE_STATES_HPP
