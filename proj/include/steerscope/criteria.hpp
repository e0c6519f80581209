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
 * @file    criteria.hpp
 * @brief   State-level tests: the reduction criterion, the one-sided local
 *          filter built from a reduction witness, the maximal entanglement
 *          fraction and isotropic twirling.
 *
 * The pipeline is
 *
 *     rho --reduction_check--> witness psi --build_filter--> F_B
 *         --apply_filter--> rho' --isotropic_twirl--> ISO_d(F), F > 1/d
 *
 * Every map on it is a local operation on Bob's side (filter) or local
 * unitaries plus shared randomness (twirl), so none of them can create
 * steerability.
 */

#ifndef STEERSCOPE_CRITERIA_HPP
#define STEERSCOPE_CRITERIA_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "linalg.hpp"
#include "states.hpp"

namespace steerscope {

//============================================================================
// Square embedding
//============================================================================

/// Zero-pads the smaller factor so the state lives on C^d (x) C^d with
/// d = max(dimA, dimB). |i>_A|j>_B keeps its labels. A no-op on square input.
inline DensityMatrix embed_square(const DensityMatrix &rho) {
  const std::size_t dA = rho.dimA(), dB = rho.dimB();
  if (dA == dB)
    return rho;
  const std::size_t d = std::max(dA, dB);
  const auto n = static_cast<Eigen::Index>(d * d);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  auto flat = [&](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * d + j); };
  for (std::size_t i = 0; i < dA; ++i)
    for (std::size_t j = 0; j < dB; ++j)
      for (std::size_t k = 0; k < dA; ++k)
        for (std::size_t l = 0; l < dB; ++l)
          out(flat(i, j), flat(k, l)) =
              rho.matrix()(static_cast<Eigen::Index>(i * dB + j), static_cast<Eigen::Index>(k * dB + l));
  return DensityMatrix(d, d, out);
}

//============================================================================
// Reduction criterion
//============================================================================

enum class NonSquarePolicy { Embed, Reject };

struct ReductionVerdict {
  double min_eigenvalue = 0.0;
  PureState witness;        ///< eigenvector of min_eigenvalue, in the (embedded) d x d space
  bool violated = false;    ///< min_eigenvalue < -tol_psd
  bool embedded = false;    ///< input was non-square and was zero-padded
  std::size_t d = 0;
};

/// I_d (x) rho_B - rho
inline ComplexMatrix reduction_operator(const DensityMatrix &rho) {
  if (rho.dimA() != rho.dimB())
    throw DimensionMismatch("reduction_operator: requires dimA == dimB");
  const ComplexMatrix rhoB = partial_trace_A(rho);
  return tensor(identity(rho.dimA()), rhoB) - rho.matrix();
}

/// Smallest eigenpair of I (x) rho_B - rho. Non-square states are embedded
/// into C^d (x) C^d, d = max(dimA, dimB), unless `policy` is Reject.
inline ReductionVerdict reduction_check(const DensityMatrix &rho,
                                        NonSquarePolicy policy = NonSquarePolicy::Embed) {
  const bool square = rho.dimA() == rho.dimB();
  if (!square && policy == NonSquarePolicy::Reject)
    throw DimensionMismatch("reduction_check: non-square bipartition " + std::to_string(rho.dimA()) +
                            "x" + std::to_string(rho.dimB()));
  const DensityMatrix sq = square ? rho : embed_square(rho);
  const Spectrum s = eig_hermitian(hermitian_part(reduction_operator(sq)));
  // Degenerate minima: the first column the eigensolver returns.
  const double lmin = s.values(0);
  return ReductionVerdict{lmin, PureState::normalized(s.vectors.col(0)), lmin < -tol_psd, !square,
                          sq.dimA()};
}

//============================================================================
// Local filter
//============================================================================

/// One-sided filter F_B acting on Bob's factor.
struct FilterOperator {
  std::size_t d = 0;
  ComplexMatrix matrix; ///< d x d
};

/// Multiplies `psi` by a global phase so that its largest-magnitude amplitude
/// (first one on ties) is real and positive.
inline PureState fix_global_phase(const PureState &psi) {
  const ComplexVector &a = psi.amplitudes();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < a.size(); ++i)
    if (std::abs(a(i)) > std::abs(a(best)) + 1e-14)
      best = i;
  const double m = std::abs(a(best));
  if (m == 0.0)
    return psi;
  return PureState::normalized(a * (std::conj(a(best)) / m));
}

/// F_B = sqrt(d) sum_ij conj(alpha_ij) |i><j| for psi = sum_ij alpha_ij |ij>,
/// so that psi = (I (x) F_B^dagger) |phi+_d>. No precondition on psi beyond
/// living in C^d (x) C^d.
inline FilterOperator filter_from_witness(const PureState &psi) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(psi.dim()))));
  if (n < 2 || n * n != static_cast<Eigen::Index>(psi.dim()))
    throw DimensionMismatch("filter_from_witness: witness dimension " + std::to_string(psi.dim()) +
                            " is not d^2 with d >= 2");
  const PureState fixed = fix_global_phase(psi);
  const double scale = std::sqrt(static_cast<double>(n));
  ComplexMatrix f(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      f(i, j) = scale * std::conj(fixed.amplitudes()(i * n + j));
  return FilterOperator{static_cast<std::size_t>(n), std::move(f)};
}

/// <psi| (I (x) rho_B - rho) |psi>
inline double reduction_expectation(const PureState &psi, const DensityMatrix &rho) {
  const ComplexVector &v = psi.amplitudes();
  return (v.adjoint() * reduction_operator(rho) * v)(0, 0).real();
}

/// Filter from a reduction witness of `rho`. Rejects witnesses whose
/// expectation on I (x) rho_B - rho is not negative.
inline FilterOperator build_filter(const PureState &psi, const DensityMatrix &rho) {
  if (rho.dimA() != rho.dimB() || psi.dim() != rho.dim())
    throw DimensionMismatch("build_filter: witness and state dimensions disagree");
  const double e = reduction_expectation(psi, rho);
  if (!(e < 0.0))
    detail::throw_violation("negative witness expectation", e, "build_filter");
  return filter_from_witness(psi);
}

/// tr[(I (x) F) rho (I (x) F)^dagger], before normalization.
inline double filtered_trace(const DensityMatrix &rho, const FilterOperator &f) {
  const ComplexMatrix fdf = f.matrix.adjoint() * f.matrix;
  return trace_product_real(rho.matrix(), tensor(identity(rho.dimA()), fdf));
}

/// (I (x) F) rho (I (x) F)^dagger / tr(...)
inline DensityMatrix apply_filter(const DensityMatrix &rho, const FilterOperator &f) {
  if (rho.dimB() != f.d)
    throw DimensionMismatch("apply_filter: filter acts on dimension " + std::to_string(f.d) +
                            ", Bob's factor has dimension " + std::to_string(rho.dimB()));
  const ComplexMatrix op = tensor(identity(rho.dimA()), f.matrix);
  const ComplexMatrix out = op * rho.matrix() * op.adjoint();
  const double tr = out.trace().real();
  if (!(tr > tol_trace))
    detail::throw_violation("nonvanishing filtered trace", tr, "apply_filter");
  return DensityMatrix::from_unnormalized(rho.dimA(), rho.dimB(), out);
}

//============================================================================
// Maximal entanglement fraction
//============================================================================

struct OptimizerOptions {
  unsigned restarts = 32;
  double tolerance = 1e-10;  ///< stop when one step improves the objective by less
  unsigned max_iterations = 5000;
  std::uint64_t seed = 0;
};

struct FractionResult {
  double F = 0.0;
  ComplexMatrix uA;
  ComplexMatrix uB;
  bool converged = true;  ///< false: the best restart hit max_iterations
  unsigned iterations = 0;
};

namespace detail {

/// Unitary factor of the polar decomposition g = W P.
inline ComplexMatrix polar_unitary(const ComplexMatrix &g) {
  Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// (I (x) V)|phi+>: amplitude of |ij> is V_ji / sqrt(d).
inline ComplexVector rotated_phi_plus(const ComplexMatrix &v) {
  const Eigen::Index d = v.rows();
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexVector x(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      x(i * d + j) = s * v(j, i);
  return x;
}

struct AscentRun {
  double value;
  ComplexMatrix v;
  bool converged;
  unsigned iterations;
};

// Minorize-maximize ascent of f(V) = <phi_V| rho |phi_V> over unitaries V.
// f is a convex quadratic form in V, so f(V') >= f(V) + 2 Re tr(G^dagger (V' - V))
// with G the Euclidean gradient; the polar factor of G maximizes the bound.
inline AscentRun fraction_ascent(const ComplexMatrix &rho, ComplexMatrix v,
                                 const OptimizerOptions &opts) {
  const Eigen::Index d = v.rows();
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexVector x = rotated_phi_plus(v);
  double value = (x.adjoint() * rho * x)(0, 0).real();
  for (unsigned it = 1; it <= opts.max_iterations; ++it) {
    const ComplexVector y = rho * x;
    ComplexMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        g(j, i) = s * y(i * d + j);
    ComplexMatrix next = polar_unitary(g);
    const ComplexVector xn = rotated_phi_plus(next);
    const double vn = (xn.adjoint() * rho * xn)(0, 0).real();
    const double gain = vn - value;
    if (gain >= 0.0) {
      v = std::move(next);
      x = xn;
      value = vn;
    }
    if (gain < opts.tolerance)
      return {value, v, true, it};
  }
  return {value, v, false, opts.max_iterations};
}

} // namespace detail

/// max over local unitaries of tr(rho (U_A (x) U_B)|phi+><phi+|(U_A (x) U_B)^dagger).
///
/// Since (U_A (x) U_B)|phi+> = (I (x) U_B U_A^T)|phi+>, the search runs over a
/// single unitary on Bob's side and returns U_A = I. Restart 0 starts at the
/// identity, so the result never falls below fidelity_phi_plus(rho); the
/// remaining restarts start at Haar-random unitaries seeded from opts.seed.
inline FractionResult max_entanglement_fraction(const DensityMatrix &rho,
                                                const OptimizerOptions &opts = {}) {
  if (rho.dimA() != rho.dimB())
    throw DimensionMismatch("max_entanglement_fraction: requires dimA == dimB");
  const std::size_t d = rho.dimA();
  const ComplexMatrix m = hermitian_part(rho.matrix());
  const unsigned restarts = std::max(1u, opts.restarts);

  detail::AscentRun best{-1.0, identity(d), true, 0};
  for (unsigned r = 0; r < restarts; ++r) {
    ComplexMatrix start;
    if (r == 0) {
      start = identity(d);
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      start = random_unitary(d, rng);
    }
    detail::AscentRun run = detail::fraction_ascent(m, std::move(start), opts);
    if (run.value > best.value)
      best = std::move(run);
  }
  // Different summation order from fidelity_phi_plus; keep F >= that value exactly.
  const double F = std::max(best.value, fidelity_phi_plus(rho));
  return FractionResult{std::clamp(F, 0.0, 1.0), identity(d), best.v, best.converged, best.iterations};
}

struct TwirlResult {
  IsotropicClass iso;
  bool converged = true;
  ComplexMatrix uA;
  ComplexMatrix uB;
};

/// Isotropic class reached by twirling rho after aligning it with the best
/// maximally entangled state. With `canonical_only` no alignment is done and
/// F is the plain fidelity with |phi+_d>.
inline TwirlResult isotropic_twirl(const DensityMatrix &rho, const OptimizerOptions &opts = {},
                                   bool canonical_only = false) {
  if (rho.dimA() != rho.dimB())
    throw DimensionMismatch("isotropic_twirl: requires dimA == dimB");
  const std::size_t d = rho.dimA();
  if (canonical_only)
    return TwirlResult{{d, std::clamp(fidelity_phi_plus(rho), 0.0, 1.0)}, true, identity(d), identity(d)};
  FractionResult r = max_entanglement_fraction(rho, opts);
  return TwirlResult{{d, r.F}, r.converged, std::move(r.uA), std::move(r.uB)};
}

} // namespace steerscope

#endif // STEERSCOPE_CRITERIA_HPP
