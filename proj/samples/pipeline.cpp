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

// Walks a weakly entangled two-qubit pure state through the reduction
// test, the local filter and the twirl, then asks how many copies are needed.

#include <iostream>

#include <steerscope/steerscope.hpp>

int main() {
  using namespace steerscope;

  const DensityMatrix rho = pure_schmidt({std::sqrt(0.9), std::sqrt(0.1)});
  const ReductionVerdict v = reduction_check(rho);
  std::cout << "min eigenvalue of I x rho_B - rho: " << v.min_eigenvalue << "\n";

  const FilterOperator f = build_filter(v.witness, rho);
  const DensityMatrix filtered = apply_filter(rho, f);
  std::cout << "fidelity with phi+ before / after filter: " << fidelity_phi_plus(rho) << " / "
            << fidelity_phi_plus(filtered) << "\n";

  const TwirlResult tw = isotropic_twirl(filtered);
  const CopySearch k = minimal_k(tw.iso.d, tw.iso.F);
  std::cout << "ISO_" << tw.iso.d << "(" << tw.iso.F << ") is k-copy steerable for k = "
            << (k.k ? std::to_string(*k.k) : std::string("none")) << "\n";

  std::cout << "two-copy projective super-activation from d = "
            << minimal_d_two_copies(MeasurementClass::Projective).value_or(0) << "\n";
}
