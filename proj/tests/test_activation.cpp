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

#include <gtest/gtest.h>

#include <steerscope/activation.hpp>

#include "oracles.hpp"

using namespace steerscope;

namespace {

// Smallest k with F^k > f_proj(d^k), by exact oracle arithmetic. The
// harmonic sum is accumulated term by term.
std::optional<unsigned> oracle_min_k(unsigned long d, const mpq_class &F, unsigned k_max) {
  unsigned long n = 1, summed = 0;
  mpq_class h = 0;
  for (unsigned k = 1; k <= k_max; ++k) {
    n *= d;
    if (n > 20000)
      return std::nullopt;
    for (; summed < n; ++summed)
      h += mpq_class(1, summed + 1);
    const mpq_class t = (mpq_class(n + 1) * h - n) / mpq_class(mpz_class(n) * n);
    if (oracle::power(F, k) > t)
      return k;
  }
  return std::nullopt;
}

} // namespace

TEST(MinimalK, PublishedCounts) {
  EXPECT_EQ(minimal_k(2, mpq_class(5, 8)).k, 7u);
  EXPECT_EQ(minimal_k(2, mpq_class(9, 16)).k, 24u);
  EXPECT_EQ(minimal_k(3, 1.0).k, 1u);
}

TEST(MinimalK, AsPrintedFormAtProjectiveBoundary) {
  // The as-printed threshold is negative at k=1, so one copy already passes.
  EXPECT_LT(kcopy_threshold(2, 1, KCopyForm::AsPrinted).exact, 0);
  EXPECT_EQ(minimal_k(2, mpq_class(5, 8), KCopyForm::AsPrinted).k, 1u);
}

TEST(MinimalK, DefiningInequalityAtKAndNotBefore) {
  for (std::uint64_t d : {2, 3, 4})
    for (int i = 1; i <= 20; ++i) {
      const mpq_class F = mpq_class(1, d) + mpq_class(i, 20) * (1 - mpq_class(1, d));
      for (KCopyForm form : {KCopyForm::Proof, KCopyForm::AsPrinted}) {
        const CopySearch s = minimal_k(d, F, form, 1000);
        ASSERT_TRUE(s.k) << d << " " << F.get_str();
        EXPECT_TRUE(kcopy_condition_holds(d, F, *s.k, form));
        for (unsigned k = 1; k < *s.k; ++k)
          EXPECT_FALSE(kcopy_condition_holds(d, F, k, form)) << d << " " << k;
      }
    }
}

TEST(MinimalK, MatchesExactOracle) {
  for (unsigned long d : {2ul, 3ul})
    for (int i = 1; i <= 10; ++i) {
      const mpq_class F = mpq_class(1, d) + mpq_class(i, 10) * (1 - mpq_class(1, d));
      const auto expect = oracle_min_k(d, F, 64);
      if (!expect)
        continue;
      EXPECT_EQ(minimal_k(d, F).k, expect) << d << " " << F.get_str();
    }
}

TEST(MinimalK, MonotoneInF) {
  for (std::uint64_t d : {2, 3}) {
    unsigned prev = 1000;
    for (int i = 1; i <= 40; ++i) {
      const mpq_class F = mpq_class(1, d) + mpq_class(i, 40) * (1 - mpq_class(1, d));
      const CopySearch s = minimal_k(d, F, KCopyForm::Proof, 200);
      ASSERT_TRUE(s.k);
      EXPECT_LE(*s.k, prev);
      prev = *s.k;
    }
  }
}

TEST(MinimalK, VariantOrder) {
  for (std::uint64_t d : {2, 3, 5})
    for (int i = 1; i <= 10; ++i) {
      const mpq_class F = mpq_class(1, d) + mpq_class(i, 10) * (1 - mpq_class(1, d));
      EXPECT_LE(*minimal_k(d, F, KCopyForm::AsPrinted).k, *minimal_k(d, F).k);
    }
}

TEST(MinimalK, NoneResults) {
  const CopySearch low = minimal_k(2, 0.5);
  EXPECT_FALSE(low.k);
  EXPECT_FALSE(low.note.empty());
  const CopySearch capped = minimal_k(2, mpq_class(9, 16), KCopyForm::Proof, 10);
  EXPECT_FALSE(capped.k);
  EXPECT_EQ(capped.k_max, 10u);
  EXPECT_NE(capped.note.find("10"), std::string::npos);
  EXPECT_THROW(minimal_k(2, 1.5), std::invalid_argument);
  EXPECT_THROW(minimal_k(1, 0.9), std::invalid_argument);
}

TEST(Window, ProjectiveD2) {
  const Window w7 = window_bounds(2, 7, MeasurementClass::Projective);
  EXPECT_TRUE(w7.nonempty);
  EXPECT_EQ(w7.high.exact, mpq_class(5, 8));
  EXPECT_LT(w7.low.approx(), 0.625);
  EXPECT_GT(w7.low.approx(), 0.5);
  EXPECT_FALSE(superactivation_window(2, 6, MeasurementClass::Projective));
  EXPECT_THROW(window_bounds(2, 1, MeasurementClass::Projective), std::invalid_argument);
}

TEST(Window, PovmD2) {
  EXPECT_TRUE(superactivation_window(2, 24, MeasurementClass::POVM));
  EXPECT_FALSE(superactivation_window(2, 23, MeasurementClass::POVM));
  EXPECT_EQ(minimal_k_window(2, MeasurementClass::POVM), 24u);
  EXPECT_EQ(minimal_k_window(2, MeasurementClass::Projective), 7u);
}

TEST(Window, TwoCopiesByDimension) {
  EXPECT_FALSE(superactivation_window(4, 2, MeasurementClass::Projective));
  EXPECT_TRUE(superactivation_window(5, 2, MeasurementClass::Projective));
  EXPECT_TRUE(superactivation_window(6, 2, MeasurementClass::Projective));
  EXPECT_EQ(minimal_d_two_copies(MeasurementClass::Projective), 5u);
  // exact oracle for the same scan
  std::uint64_t expect = 0;
  for (unsigned long d = 2; d <= 64 && !expect; ++d)
    if (oracle::power(oracle::f_proj(d), 2) > oracle::f_proj(d * d))
      expect = d;
  EXPECT_EQ(minimal_d_two_copies(MeasurementClass::Projective), expect);

}

TEST(Window, NoTwoCopyPovmWindow) {
  // The POVM bound decays like 1/d, so its square never clears f_proj(d^2).
  EXPECT_FALSE(minimal_d_two_copies(MeasurementClass::POVM));
  for (unsigned long d = 2; d <= 20; ++d) {
    const mpq_class eta = mpq_class(3 * d - 1) * oracle::power(mpq_class(d - 1), unsigned(d - 1)) /
                          (mpq_class(d + 1) * oracle::power(mpq_class(d), unsigned(d)));
    const mpq_class inv = mpq_class(1, d * d);
    const mpq_class povm = inv + eta * (1 - inv);
    EXPECT_EQ(povm_lhs_threshold(d).exact, povm) << d;
    EXPECT_LE(oracle::power(povm, 2), oracle::f_proj(d * d)) << d;
  }
}

TEST(Window, Consistency) {
  for (std::uint64_t d : {2, 3, 4})
    for (unsigned k = 2; k <= 12; ++k) {
      const Window w = window_bounds(d, k, MeasurementClass::Projective);
      if (!w.nonempty)
        continue;
      // a rational just below the upper end lies inside
      const mpq_class F = w.high.exact - mpq_class(1, 1000000);
      if (F <= mpq_class(w.low.upper.to_double(MPFR_RNDU)))
        continue;
      EXPECT_LE(*minimal_k(d, F).k, k);
      EXPECT_LE(F, single_copy_bound(d, MeasurementClass::Projective).exact);
      EXPECT_TRUE(kcopy_condition_holds(d, F, k));
    }
}

TEST(Bootstrap, Examples) {
  const auto a = bootstrap_two_copy(2, 0.625);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->critical_copies, 6u);
  EXPECT_EQ(a->new_dim, 64);
  EXPECT_NE(a->note.find("not certified"), std::string::npos);
  const auto b = bootstrap_two_copy(2, mpq_class(9, 16));
  ASSERT_TRUE(b);
  EXPECT_EQ(b->critical_copies, 23u);
  EXPECT_EQ(b->new_dim, mpz_class(1) << 23);
  EXPECT_FALSE(bootstrap_two_copy(2, 1.0));
  EXPECT_FALSE(bootstrap_two_copy(2, 0.4));
}

TEST(Hashing, Examples) {
  EXPECT_TRUE(hashing_check(DensityMatrix(2, 2, phi_plus(2).projector())));
  EXPECT_FALSE(hashing_check(DensityMatrix(2, 2, identity(4) / 4.0)));
  EXPECT_TRUE(hashing_check(isotropic(2, 0.82)));
  EXPECT_FALSE(hashing_check(isotropic(2, 0.80)));
  const HashingResult h = hashing_entropies(DensityMatrix(2, 2, phi_plus(2).projector()));
  EXPECT_NEAR(h.entropy_rho_b - h.entropy_rho, 1.0, 1e-12);
}

TEST(Hashing, IsotropicFamilyMatchesClosedForm) {
  for (int i = 0; i <= 50; ++i) {
    const double F = 0.5 + 0.5 * i / 50.0;
    const double gap = 1.0 - oracle::iso2_entropy(F);
    if (std::abs(gap) < 1e-6)
      continue;
    EXPECT_EQ(hashing_check(isotropic(2, F)), gap > 1e-9) << F;
  }
}

TEST(TensorPowerOracle, FidelityIsPower) {
  for (std::size_t d : {2u, 3u})
    for (double F : {0.3, 0.6, 0.9}) {
      const DensityMatrix two = bipartite_tensor_power(isotropic(d, F), 2);
      EXPECT_NEAR(fidelity_phi_plus(two), F * F, 1e-12);
    }
}

TEST(Analyze, PhiPlus) {
  const ActivationReport r = analyze(DensityMatrix(2, 2, phi_plus(2).projector()));
  EXPECT_TRUE(r.reduction_violated);
  EXPECT_NEAR(r.reduction_min_eig, -0.5, 1e-12);
  EXPECT_NEAR(r.F, 1.0, 1e-9);
  EXPECT_EQ(r.k_min_proj, 1u);
  EXPECT_TRUE(r.hashing_distillable);
  EXPECT_FALSE(r.bootstrap);
  EXPECT_FALSE(r.iso_lhs_projective);
}

TEST(Analyze, Isotropic06) {
  const ActivationReport r = analyze(isotropic(2, 0.6));
  EXPECT_TRUE(r.reduction_violated);
  EXPECT_NEAR(r.F, 0.6, 1e-9);
  ASSERT_TRUE(r.k_min_proj);
  const auto expect = oracle_min_k(2, mpq_class(r.F), 64);
  EXPECT_EQ(r.k_min_proj, expect);
  EXPECT_TRUE(r.iso_lhs_projective);
  EXPECT_TRUE(r.window);
  EXPECT_FALSE(r.hashing_distillable);
}

TEST(Analyze, BoundaryState) {
  const ActivationReport r = analyze(isotropic(2, 0.625));
  EXPECT_EQ(r.k_min_proj, 7u);
  EXPECT_EQ(r.k_min_eq10, 1u);
  ASSERT_TRUE(r.bootstrap);
  EXPECT_EQ(r.bootstrap->critical_copies, 6u);
  EXPECT_EQ(r.bootstrap->new_dim, "64");
  bool disagreement = false;
  for (const auto &n : r.notes)
    disagreement |= n.find("disagree") != std::string::npos;
  EXPECT_TRUE(disagreement);
}

TEST(Analyze, SeparableState) {
  const ActivationReport r = analyze(product_state(random_density(1, 2, 2, 1).matrix(),
                                                   random_density(1, 2, 2, 2).matrix()));
  EXPECT_FALSE(r.reduction_violated);
  EXPECT_FALSE(r.k_min_proj);
  EXPECT_FALSE(r.k_min_eq10);
  EXPECT_FALSE(r.hashing_distillable);
  EXPECT_FALSE(r.filtered_fidelity);
}

TEST(Analyze, NonSquareEmbedded) {
  const ActivationReport r = analyze(random_density(2, 3, 1, 12));
  EXPECT_TRUE(r.embedded);
  EXPECT_EQ(r.d, 3u);
  EXPECT_TRUE(r.reduction_violated);
  ASSERT_TRUE(r.filtered_fidelity);
  EXPECT_GT(*r.filtered_fidelity, 1.0 / 3.0);
  EXPECT_TRUE(r.k_min_proj);
  bool noted = false;
  for (const auto &n : r.notes)
    noted |= n.find("zero-padded") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Analyze, KMinFieldsVerifiedByRecomputation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ActivationReport r = analyze(random_density(2, 2, 1 + seed % 3, seed));
    const mpq_class F(r.F);
    if (r.k_min_proj) {
      EXPECT_TRUE(kcopy_condition_holds(r.d, F, *r.k_min_proj));
      if (*r.k_min_proj > 1)
        EXPECT_FALSE(kcopy_condition_holds(r.d, F, *r.k_min_proj - 1));
    }
    if (r.k_min_eq10) {
      EXPECT_TRUE(kcopy_condition_holds(r.d, F, *r.k_min_eq10, KCopyForm::AsPrinted));
      if (*r.k_min_eq10 > 1)
        EXPECT_FALSE(kcopy_condition_holds(r.d, F, *r.k_min_eq10 - 1, KCopyForm::AsPrinted));
    }
  }
}

TEST(Analyze, Deterministic) {
  const DensityMatrix rho = random_density(3, 3, 4, 8);
  EXPECT_EQ(analyze(rho), analyze(rho));
}
