#pragma once

#include <cstddef>
#include <cstdint>

#include "kickdyn/analytic.hpp"
#include "kickdyn/rng.hpp"

namespace kickdyn {

struct LemmaSuiteOptions {
  int n_min = 2;
  int n_max = 10;
  std::size_t samples = 1000;  // random x' per map order
  std::uint64_t seed = kDefaultSeed;
  double reconstruction_tol = 1e-9;
  double sum_tol = 1e-10;
  double weight_rel_tol = 1e-9;
  double invariance_rel_tol = 1e-9;
  double closed_form_tol = 1e-12;
};

/// Property checks of the Chebyshev preimage structure over random x' in
/// (-1,1): reconstruction T_N(p) = x', vanishing sums of T_M (1 <= M < N),
/// constant Perron-Frobenius weight, invariance of the arcsine density, and
/// recurrence against cos(N arccos x). One check per property and order.
[[nodiscard]] VerificationReport run_lemma_suite(const LemmaSuiteOptions& options = {});

/// Lemma suite followed by the exact residual suite.
[[nodiscard]] VerificationReport run_full_verification(const LemmaSuiteOptions& options = {},
                                                       const SolutionOverrides& overrides = {});

}  // namespace kickdyn
