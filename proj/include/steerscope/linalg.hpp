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
 * @file    linalg.hpp
 * @brief   Dense complex-Hermitian kernel: Kronecker products, partial
 *          traces, Hermitian eigendecomposition and von Neumann entropy.
 *
 * Bipartite basis ordering throughout the library: |i>_A |j>_B is the flat
 * index i * dimB + j.
 */

#ifndef STEERSCOPE_LINALG_HPP
#define STEERSCOPE_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace steerscope {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Max absolute entry deviation from the conjugate transpose.
inline constexpr double tol_herm = 1e-10;
inline constexpr double tol_trace = 1e-10;
inline constexpr double tol_psd = 1e-9;
inline constexpr double tol_norm = 1e-12;

//============================================================================
// Errors
//============================================================================

/// A validated object failed one of its invariants. `invariant()` names it,
/// `magnitude()` is the size of the violation.
class InvariantViolation : public std::invalid_argument {
public:
  InvariantViolation(std::string invariant, double magnitude, const std::string &what)
      : std::invalid_argument(what), invariant_(std::move(invariant)), magnitude_(magnitude) {}

  const std::string &invariant() const noexcept { return invariant_; }
  double magnitude() const noexcept { return magnitude_; }

private:
  std::string invariant_;
  double magnitude_;
};

class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string format_violation(const std::string &invariant, double magnitude,
                                    const std::string &context) {
  std::ostringstream ss;
  ss.precision(6);
  ss << context << ": " << invariant << " violated (magnitude " << magnitude << ")";
  return ss.str();
}

[[noreturn]] inline void throw_violation(const std::string &invariant, double magnitude,
                                         const std::string &context) {
  throw InvariantViolation(invariant, magnitude, format_violation(invariant, magnitude, context));
}

} // namespace detail

//============================================================================
// Matrix checks
//============================================================================

inline bool all_finite(const ComplexMatrix &m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag()))
        return false;
  return true;
}

/// max_{ij} |m_ij - conj(m_ji)|; +inf for non-square input.
inline double hermiticity_defect(const ComplexMatrix &m) {
  if (m.rows() != m.cols())
    return std::numeric_limits<double>::infinity();
  if (m.size() == 0)
    return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double max_abs_entry(const ComplexMatrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline ComplexMatrix hermitian_part(const ComplexMatrix &m) { return 0.5 * (m + m.adjoint()); }

inline ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

//============================================================================
// Domain types
//============================================================================

/// Square matrix equal to its adjoint within tol_herm.
class HermitianOperator {
public:
  explicit HermitianOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols())
      throw DimensionMismatch("HermitianOperator: matrix is " + std::to_string(matrix_.rows()) +
                              "x" + std::to_string(matrix_.cols()) + ", expected square");
    if (!all_finite(matrix_))
      detail::throw_violation("finite entries", std::numeric_limits<double>::infinity(),
                              "HermitianOperator");
    const double defect = hermiticity_defect(matrix_);
    if (defect > tol_herm)
      detail::throw_violation("hermiticity", defect, "HermitianOperator");
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix &matrix() const noexcept { return matrix_; }

private:
  ComplexMatrix matrix_;
};

/// Unit vector in C^dim.
class PureState {
public:
  explicit PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0)
      throw DimensionMismatch("PureState: empty amplitude vector");
    const double defect = std::abs(amplitudes_.norm() - 1.0);
    if (!(defect <= tol_norm))
      detail::throw_violation("unit norm", defect, "PureState");
  }

  /// Rescales `v` to unit norm; rejects the zero vector.
  static PureState normalized(const ComplexVector &v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n))
      detail::throw_violation("nonzero norm", n, "PureState::normalized");
    return PureState(v / n);
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector &amplitudes() const noexcept { return amplitudes_; }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

private:
  ComplexVector amplitudes_;
};

struct Spectrum {
  RealVector values;     ///< ascending
  ComplexMatrix vectors; ///< column i belongs to values(i)
};

inline Spectrum eig_hermitian(const HermitianOperator &h);

/// Bipartite mixed state on C^dimA (x) C^dimB.
///
/// Construction validates: finite entries, Hermitian within tol_herm, unit
/// trace within tol_trace, smallest eigenvalue >= -tol_psd.
class DensityMatrix {
public:
  DensityMatrix(std::size_t dimA, std::size_t dimB, ComplexMatrix m)
      : dimA_(dimA), dimB_(dimB), matrix_(std::move(m)) {
    const auto n = static_cast<Eigen::Index>(dimA_ * dimB_);
    if (dimA_ == 0 || dimB_ == 0)
      throw DimensionMismatch("DensityMatrix: dimensions must be positive");
    if (matrix_.rows() != n || matrix_.cols() != n)
      throw DimensionMismatch("DensityMatrix: matrix is " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + ", expected " + std::to_string(n) +
                              "x" + std::to_string(n) + " for dims " + std::to_string(dimA_) +
                              "x" + std::to_string(dimB_));
    if (!all_finite(matrix_))
      detail::throw_violation("finite entries", std::numeric_limits<double>::infinity(),
                              "DensityMatrix");
    const double herm = hermiticity_defect(matrix_);
    if (herm > tol_herm)
      detail::throw_violation("hermiticity", herm, "DensityMatrix");
    const double trace_defect = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    if (trace_defect > tol_trace)
      detail::throw_violation("unit trace", trace_defect, "DensityMatrix");
    const double min_eig = eig_hermitian(HermitianOperator(hermitian_part(matrix_))).values(0);
    if (min_eig < -tol_psd)
      detail::throw_violation("positive semidefinite", -min_eig, "DensityMatrix");
  }

  /// Symmetrizes and renormalizes `m` before validation; for builders whose
  /// output is a density matrix up to rounding.
  static DensityMatrix from_unnormalized(std::size_t dimA, std::size_t dimB, const ComplexMatrix &m) {
    ComplexMatrix h = hermitian_part(m);
    const double tr = h.trace().real();
    if (!(std::abs(tr) > 0.0))
      detail::throw_violation("nonzero trace", std::abs(tr), "DensityMatrix::from_unnormalized");
    return DensityMatrix(dimA, dimB, h / tr);
  }

  std::size_t dimA() const noexcept { return dimA_; }
  std::size_t dimB() const noexcept { return dimB_; }
  std::size_t dim() const noexcept { return dimA_ * dimB_; }
  const ComplexMatrix &matrix() const noexcept { return matrix_; }

  friend bool operator==(const DensityMatrix &a, const DensityMatrix &b) {
    return a.dimA_ == b.dimA_ && a.dimB_ == b.dimB_ && a.matrix_ == b.matrix_;
  }

private:
  std::size_t dimA_;
  std::size_t dimB_;
  ComplexMatrix matrix_;
};

//============================================================================
// Operations
//============================================================================

/// Kronecker product; the row index of `a` is the major index.
inline ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector tensor(const ComplexVector &a, const ComplexVector &b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// tr_A of a (dimA*dimB)-square matrix; no positivity requirement.
inline ComplexMatrix partial_trace_A(const ComplexMatrix &m, std::size_t dimA, std::size_t dimB) {
  const auto dA = static_cast<Eigen::Index>(dimA);
  const auto dB = static_cast<Eigen::Index>(dimB);
  if (m.rows() != dA * dB || m.cols() != dA * dB)
    throw DimensionMismatch("partial_trace_A: matrix size " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + " does not match dims " +
                            std::to_string(dimA) + "x" + std::to_string(dimB));
  ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
  for (Eigen::Index i = 0; i < dA; ++i)
    out += m.block(i * dB, i * dB, dB, dB);
  return out;
}

inline ComplexMatrix partial_trace_A(const DensityMatrix &rho) {
  return partial_trace_A(rho.matrix(), rho.dimA(), rho.dimB());
}

inline ComplexMatrix partial_trace_B(const ComplexMatrix &m, std::size_t dimA, std::size_t dimB) {
  const auto dA = static_cast<Eigen::Index>(dimA);
  const auto dB = static_cast<Eigen::Index>(dimB);
  if (m.rows() != dA * dB || m.cols() != dA * dB)
    throw DimensionMismatch("partial_trace_B: matrix size does not match dims");
  ComplexMatrix out(dA, dA);
  for (Eigen::Index i = 0; i < dA; ++i)
    for (Eigen::Index k = 0; k < dA; ++k)
      out(i, k) = m.block(i * dB, k * dB, dB, dB).trace();
  return out;
}

/// Eigenpairs of a Hermitian operator, eigenvalues ascending.
inline Spectrum eig_hermitian(const HermitianOperator &h) {
  if (h.dim() == 0)
    return {};
  // Solve on the exactly Hermitian part so the tolerance-level defect does
  // not leak into the eigenvectors.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h.matrix()));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline Spectrum eig_hermitian(const ComplexMatrix &m) { return eig_hermitian(HermitianOperator(m)); }

/// -sum_i l_i log2 l_i over the spectrum of `rho`. Eigenvalues in
/// [-tol_psd, 0) are clamped to zero.
inline double von_neumann_entropy(const ComplexMatrix &rho) {
  const Spectrum s = eig_hermitian(rho);
  if (s.values.size() == 0)
    return 0.0;
  if (s.values(0) < -tol_psd)
    detail::throw_violation("positive semidefinite", -s.values(0), "von_neumann_entropy");
  double h = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double l = s.values(i);
    if (l > 0.0)
      h -= l * std::log2(l);
  }
  return h;
}

inline double von_neumann_entropy(const DensityMatrix &rho) { return von_neumann_entropy(rho.matrix()); }

/// Re tr(a b) without forming the product.
inline double trace_product_real(const ComplexMatrix &a, const ComplexMatrix &b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

} // namespace steerscope

#endif // STEERSCOPE_LINALG_HPP
