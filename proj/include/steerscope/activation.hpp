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
 * @file    activation.hpp
 * @brief   k-copy steerability searches, super-activation windows, the
 *          two-copy bootstrap, the one-way hashing test and the full
 *          per-state analysis.
 *
 * Strictness: a single copy of ISO_d(F) has an LHS model when F <= bound;
 * k copies are steerable when F^k > T(d, k). Windows are half-open,
 * (F_low, F_high].
 */

#ifndef STEERSCOPE_ACTIVATION_HPP
#define STEERSCOPE_ACTIVATION_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "linalg.hpp"
#include "states.hpp"
#include "thresholds.hpp"

namespace steerscope {

enum class MeasurementClass { Projective, POVM };

inline const char *to_string(MeasurementClass m) {
  return m == MeasurementClass::Projective ? "projective" : "povm";
}

//============================================================================
// Minimal number of copies
//============================================================================

struct CopySearch {
  std::optional<unsigned> k;
  unsigned k_max = 64;
  std::string note;
};

namespace detail {

/// ln T(d, k) in double precision for d^k beyond the exact range, or NaN
/// when the estimate is not usable. Only used to skip certified comparisons
/// that fail by a wide margin.
inline double log_threshold_estimate(std::uint64_t d, unsigned k, KCopyForm form) {
  const double ln_n = static_cast<double>(k) * std::log(static_cast<double>(d));
  const double inv_n = std::exp(-ln_n);
  const double h = ln_n + 0.57721566490153286 + 0.5 * inv_n;
  const double hh = form == KCopyForm::Proof ? h : h - 1.0;
  // T = ((1 + n) hh - n) / n^2 = (hh - 1 + hh / n) / n
  const double inner = hh - 1.0 + hh * inv_n;
  if (!(inner > 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  return std::log(inner) - ln_n;
}

} // namespace detail

/// Smallest k <= k_max with F^k > kcopy_threshold(d, k, form).
inline CopySearch minimal_k(std::uint64_t d, const mpq_class &F, KCopyForm form = KCopyForm::Proof,
                            unsigned k_max = 64, const CertifyOptions &opts = {}) {
  if (d < 2)
    throw std::invalid_argument("minimal_k: d must be >= 2");
  if (F < 0 || F > 1)
    throw std::invalid_argument("minimal_k: F must lie in [0, 1]");
  CopySearch out;
  out.k_max = k_max;
  if (F * static_cast<unsigned long>(d) <= 1) {
    out.note = "F <= 1/d: the twirl route cannot certify k-copy steerability";
    return out;
  }
  const double ln_F = std::log(F.get_d());
  for (unsigned k = 1; k <= k_max; ++k) {
    // Skip k whose float estimate fails by a relative margin far above rounding.
    if (ipow(d, k) > opts.exact_limit) {
      const double est = detail::log_threshold_estimate(d, k, form);
      const double lhs = static_cast<double>(k) * ln_F;
      if (std::isfinite(est) && lhs < est - 1e-8 * (1.0 + std::abs(est)))
        continue;
    }
    const bool steerable = strictly_exceeds(
        qpow(F, k), [&](const CertifyOptions &o) { return kcopy_threshold(d, k, form, o); }, opts);
    if (steerable) {
      out.k = k;
      return out;
    }
  }
  out.note = "no k <= " + std::to_string(k_max) + " satisfies the k-copy condition";
  return out;
}

inline CopySearch minimal_k(std::uint64_t d, double F, KCopyForm form = KCopyForm::Proof,
                            unsigned k_max = 64, const CertifyOptions &opts = {}) {
  if (!(F >= 0.0 && F <= 1.0))
    throw std::invalid_argument("minimal_k: F must lie in [0, 1]");
  return minimal_k(d, mpq_class(F), form, k_max, opts);
}

/// Recomputes F^k > T(d, k) directly.
inline bool kcopy_condition_holds(std::uint64_t d, const mpq_class &F, unsigned k,
                                  KCopyForm form = KCopyForm::Proof, const CertifyOptions &opts = {}) {
  return strictly_exceeds(
      qpow(F, k), [&](const CertifyOptions &o) { return kcopy_threshold(d, k, form, o); }, opts);
}

//============================================================================
// Super-activation windows
//============================================================================

/// Single-copy LHS bound on F for the given measurement class.
inline ThresholdValue single_copy_bound(std::uint64_t d, MeasurementClass mclass,
                                        PovmForm povm_form = PovmForm::Converted) {
  return mclass == MeasurementClass::Projective ? projective_lhs_threshold(d)
                                                : povm_lhs_threshold(d, povm_form);
}

struct Window {
  std::uint64_t d = 2;
  unsigned k = 2;
  MeasurementClass mclass = MeasurementClass::Projective;
  ThresholdValue low;  ///< T(d, k)^{1/k}, certified enclosure
  ThresholdValue high; ///< single-copy LHS bound, exact
  bool nonempty = false;
};

namespace detail {

inline ThresholdValue kth_root(const ThresholdValue &t, unsigned k) {
  const mpfr_prec_t p = std::max<mpfr_prec_t>(t.upper.precision(), 128);
  BigFloat lo(p), hi(p);
  mpfr_rootn_ui(lo.get(), t.lower.get(), k, MPFR_RNDD);
  mpfr_rootn_ui(hi.get(), t.upper.get(), k, MPFR_RNDU);
  return ThresholdValue::from_enclosure(std::move(lo), std::move(hi));
}

} // namespace detail

/// Both ends of the window (F_low, F_high] and whether it is nonempty,
/// i.e. whether F_high^k > T(d, k). Requires k >= 2.
inline Window window_bounds(std::uint64_t d, unsigned k, MeasurementClass mclass,
                            PovmForm povm_form = PovmForm::Converted, const CertifyOptions &opts = {}) {
  if (k < 2)
    throw std::invalid_argument("superactivation_window: k must be >= 2");
  Window w;
  w.d = d;
  w.k = k;
  w.mclass = mclass;
  w.high = single_copy_bound(d, mclass, povm_form);
  if (!w.high.is_exact())
    throw std::invalid_argument("superactivation_window: single-copy bound not exact at d=" +
                                std::to_string(d));
  const ThresholdValue t = kcopy_threshold(d, k, KCopyForm::Proof, opts);
  w.low = detail::kth_root(t, k);
  w.nonempty = strictly_exceeds(
      qpow(w.high.exact, k), [&](const CertifyOptions &o) { return kcopy_threshold(d, k, KCopyForm::Proof, o); },
      opts);
  return w;
}

inline std::optional<Window> superactivation_window(std::uint64_t d, unsigned k, MeasurementClass mclass,
                                                    PovmForm povm_form = PovmForm::Converted,
                                                    const CertifyOptions &opts = {}) {
  Window w = window_bounds(d, k, mclass, povm_form, opts);
  if (!w.nonempty)
    return std::nullopt;
  return w;
}

/// Smallest d in [2, d_max] with a nonempty two-copy window.
inline std::optional<std::uint64_t> minimal_d_two_copies(MeasurementClass mclass,
                                                         PovmForm povm_form = PovmForm::Converted,
                                                         std::uint64_t d_max = 64,
                                                         const CertifyOptions &opts = {}) {
  for (std::uint64_t d = 2; d <= d_max; ++d)
    if (window_bounds(d, 2, mclass, povm_form, opts).nonempty)
      return d;
  return std::nullopt;
}

/// Smallest k in [2, k_max] with a nonempty window at dimension d.
inline std::optional<unsigned> minimal_k_window(std::uint64_t d, MeasurementClass mclass,
                                                PovmForm povm_form = PovmForm::Converted,
                                                unsigned k_max = 64, const CertifyOptions &opts = {}) {
  for (unsigned k = 2; k <= k_max; ++k)
    if (window_bounds(d, k, mclass, povm_form, opts).nonempty)
      return k;
  return std::nullopt;
}

//============================================================================
// Two-copy bootstrap
//============================================================================

struct Bootstrap {
  unsigned critical_copies = 0; ///< k_c = minimal_k - 1
  mpz_class new_dim;            ///< d^{k_c}
  std::string note;
};

/// rho' = rho^{(x) k_c} is a two-copy super-activation candidate: two copies
/// of it are steerable. Unsteerability of rho' itself is not certified here.
inline std::optional<Bootstrap> bootstrap_two_copy(std::uint64_t d, const mpq_class &F,
                                                   KCopyForm form = KCopyForm::Proof,
                                                   unsigned k_max = 64, const CertifyOptions &opts = {}) {
  const CopySearch s = minimal_k(d, F, form, k_max, opts);
  if (!s.k || *s.k <= 1)
    return std::nullopt;
  Bootstrap b;
  b.critical_copies = *s.k - 1;
  b.new_dim = ipow(d, b.critical_copies);
  b.note = "rho^(x)" + std::to_string(b.critical_copies) + " (local dimension " + b.new_dim.get_str() +
           ") is a two-copy candidate: two copies are steerable; its single-copy unsteerability is "
           "not certified";
  return b;
}

inline std::optional<Bootstrap> bootstrap_two_copy(std::uint64_t d, double F, KCopyForm form = KCopyForm::Proof,
                                                   unsigned k_max = 64, const CertifyOptions &opts = {}) {
  return bootstrap_two_copy(d, mpq_class(F), form, k_max, opts);
}

//============================================================================
// One-way hashing
//============================================================================

inline constexpr double hashing_margin = 1e-9;

struct HashingResult {
  double entropy_rho = 0.0;
  double entropy_rho_b = 0.0;
  bool distillable = false; ///< S(rho_B) - S(rho) > hashing_margin
};

inline HashingResult hashing_entropies(const DensityMatrix &rho) {
  HashingResult h;
  h.entropy_rho = von_neumann_entropy(rho);
  h.entropy_rho_b = von_neumann_entropy(partial_trace_A(rho));
  h.distillable = h.entropy_rho_b - h.entropy_rho > hashing_margin;
  return h;
}

/// S(rho_B) > S(rho): one-way distillable, hence k-copy steerable from A to B.
inline bool hashing_check(const DensityMatrix &rho) { return hashing_entropies(rho).distillable; }

//============================================================================
// Full analysis
//============================================================================

struct AnalyzeOptions {
  KCopyForm variant = KCopyForm::Proof;
  PovmForm povm_form = PovmForm::Converted;
  unsigned k_max = 64;
  OptimizerOptions optimizer;
  CertifyOptions certify;
};

struct ReportWindow {
  unsigned k = 2;
  std::string mclass;
  double low = 0.0;
  double high = 0.0;
  std::string high_exact;

  friend bool operator==(const ReportWindow &, const ReportWindow &) = default;
};

struct ReportBootstrap {
  unsigned critical_copies = 0;
  std::string new_dim;

  friend bool operator==(const ReportBootstrap &, const ReportBootstrap &) = default;
};

struct ActivationReport {
  // input and flags in force
  std::string source;
  std::size_t dimA = 0;
  std::size_t dimB = 0;
  std::string variant = to_string(KCopyForm::Proof);
  std::string povm_form = to_string(PovmForm::Converted);
  unsigned k_max = 64;
  std::uint64_t seed = 0;

  // state-level results
  std::size_t d = 0;
  double F = 0.0;
  double reduction_min_eig = 0.0;
  bool reduction_violated = false;
  bool embedded = false;
  std::optional<double> filtered_fidelity;
  bool optimizer_converged = true;

  // single-copy LHS status of the twirled isotropic state ISO_d(F)
  bool iso_lhs_projective = false;
  bool iso_lhs_povm = false;

  // copy counts
  std::optional<unsigned> k_min_proj;
  std::optional<unsigned> k_min_eq10;
  std::optional<ReportWindow> window;
  std::optional<ReportBootstrap> bootstrap;

  // hashing
  bool hashing_distillable = false;
  double entropy_rho = 0.0;
  double entropy_rho_b = 0.0;

  std::vector<std::string> notes;

  friend bool operator==(const ActivationReport &, const ActivationReport &) = default;
};

namespace detail {

inline const char *variant_note(KCopyForm form) {
  return form == KCopyForm::Proof
             ? "k-copy threshold: proof form [(1+n)H_n - n]/n^2 at n = d^k (default); this form "
               "reproduces the published minimal copy numbers k=7 (projective) and k=24 (POVM) at d=2"
             : "k-copy threshold: as-printed form [(1+n)(H_n - 1) - n]/n^2 at n = d^k; it does not "
               "reproduce the published k=7 at d=2, the proof form does";
}

inline const char *povm_note(PovmForm form) {
  return form == PovmForm::Converted
             ? "POVM bound: converted form 1/d^2 + eta(1 - 1/d^2), eta = (3d-1)(d-1)^(d-1)/((d+1)d^d) "
               "(default); reproduces the published k=24 at d=2"
             : "POVM bound: as-printed form [1 + ((d+1)/d)^d (3d-1)]/d^2; WARNING: exceeds 1 at small d";
}

} // namespace detail

/// Reduction check -> filter -> twirl -> copy counts, plus the hashing test.
/// Sub-step failures are recorded as notes instead of aborting.
inline ActivationReport analyze(const DensityMatrix &rho, const AnalyzeOptions &opts = {},
                                std::string source = {}) {
  ActivationReport r;
  r.source = std::move(source);
  r.dimA = rho.dimA();
  r.dimB = rho.dimB();
  r.variant = to_string(opts.variant);
  r.povm_form = to_string(opts.povm_form);
  r.k_max = opts.k_max;
  r.seed = opts.optimizer.seed;

  const DensityMatrix sq = embed_square(rho);
  r.d = sq.dimA();
  if (sq.dimA() != rho.dimA() || sq.dimB() != rho.dimB()) {
    r.embedded = true;
    r.notes.push_back("non-square " + std::to_string(rho.dimA()) + "x" + std::to_string(rho.dimB()) +
                      " state zero-padded into " + std::to_string(r.d) + "x" + std::to_string(r.d) +
                      " before the reduction test (extension beyond the square case)");
  }

  const ReductionVerdict verdict = reduction_check(sq);
  r.reduction_min_eig = verdict.min_eigenvalue;
  r.reduction_violated = verdict.violated;

  DensityMatrix target = sq;
  if (verdict.violated) {
    try {
      const FilterOperator f = build_filter(verdict.witness, sq);
      target = apply_filter(sq, f);
      r.filtered_fidelity = fidelity_phi_plus(target);
    } catch (const std::exception &e) {
      r.notes.push_back(std::string("local filter failed: ") + e.what());
    }
  } else {
    r.notes.push_back("reduction criterion satisfied: the filter-and-twirl route does not apply");
  }

  const TwirlResult tw = isotropic_twirl(target, opts.optimizer);
  r.F = tw.iso.F;
  r.optimizer_converged = tw.converged;
  if (!tw.converged)
    r.notes.push_back("WARNING: entanglement-fraction optimizer hit its iteration cap; F is a lower bound");

  const std::uint64_t d = r.d;
  const mpq_class Fq(r.F);
  r.iso_lhs_projective = single_copy_bound(d, MeasurementClass::Projective).exact >= Fq;
  r.iso_lhs_povm = single_copy_bound(d, MeasurementClass::POVM, opts.povm_form).exact >= Fq;
  r.notes.push_back(detail::povm_note(opts.povm_form));

  if (verdict.violated) {
    try {
      const CopySearch proof = minimal_k(d, Fq, KCopyForm::Proof, opts.k_max, opts.certify);
      const CopySearch printed = minimal_k(d, Fq, KCopyForm::AsPrinted, opts.k_max, opts.certify);
      r.k_min_proj = proof.k;
      r.k_min_eq10 = printed.k;
      r.notes.push_back(detail::variant_note(opts.variant));
      if (!proof.note.empty())
        r.notes.push_back("proof form: " + proof.note);
      if (!printed.note.empty())
        r.notes.push_back("as-printed form: " + printed.note);
      if (proof.k != printed.k)
        r.notes.push_back("k-copy forms disagree: proof gives " +
                          (proof.k ? std::to_string(*proof.k) : std::string("none")) +
                          ", as-printed gives " +
                          (printed.k ? std::to_string(*printed.k) : std::string("none")));

      const std::optional<unsigned> k_sel = opts.variant == KCopyForm::Proof ? proof.k : printed.k;
      if (proof.k && *proof.k >= 2) {
        const Window w = window_bounds(d, *proof.k, MeasurementClass::Projective, opts.povm_form, opts.certify);
        if (w.nonempty)
          r.window = ReportWindow{w.k, to_string(w.mclass), w.low.approx(), w.high.approx(),
                                  w.high.exact_string()};
      }
      if (k_sel && *k_sel >= 2) {
        const auto b = bootstrap_two_copy(d, Fq, opts.variant, opts.k_max, opts.certify);
        if (b) {
          r.bootstrap = ReportBootstrap{b->critical_copies, b->new_dim.get_str()};
          r.notes.push_back(b->note);
        }
      }
    } catch (const PrecisionExhausted &) {
      throw;
    } catch (const std::exception &e) {
      r.notes.push_back(std::string("copy-count search failed: ") + e.what());
    }
  }

  const HashingResult h = hashing_entropies(rho);
  r.hashing_distillable = h.distillable;
  r.entropy_rho = h.entropy_rho;
  r.entropy_rho_b = h.entropy_rho_b;
  if (h.distillable)
    r.notes.push_back("one-way hashing: S(rho_B) > S(rho), so the state is k-copy steerable from A to B");
  return r;
}

} // namespace steerscope

#endif // STEERSCOPE_ACTIVATION_HPP
