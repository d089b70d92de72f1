#include "kickdyn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "kickdyn/chebyshev.hpp"

namespace kickdyn {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

VerificationReport run_lemma_suite(const LemmaSuiteOptions& options) {
  VerificationReport report;
  for (int n = options.n_min; n <= options.n_max; ++n) {
    const MapOrder order(n);
    const ChaoticMap map(MapKind::ChebyshevTN, order);
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(n)));

    double worst_reconstruction = 0.0;
    double worst_sum = 0.0;
    double worst_weight = 0.0;
    double worst_invariance = 0.0;
    double worst_closed_form = 0.0;
    bool weights_consistent = true;

    for (std::size_t s = 0; s < options.samples; ++s) {
      const double xp = rng.uniform_open_unit();
      const PreimageSet set = preimages(order, xp);
      for (double p : set.points) {
        worst_reconstruction = std::max(worst_reconstruction, std::abs(map(p) - xp));
      }
      for (int m = 1; m < n; ++m) {
        worst_sum = std::max(worst_sum, std::abs(preimage_sum(order, m, xp)));
      }
      const WeightCheck wc = weight_constancy_check(order, xp, options.weight_rel_tol);
      weights_consistent = weights_consistent && wc.consistent;
      worst_weight = std::max(worst_weight, wc.max_relative_deviation);

      double pushed = 0.0;
      for (double p : set.points) pushed += invariant_density(p) / std::abs(eval_derivative(order, p));
      const double h = invariant_density(xp);
      worst_invariance = std::max(worst_invariance, std::abs(pushed - h) / h);

      // Closed form only on |x| <= 1 - 1e-6, where acos is well conditioned.
      const double x = xp * (1.0 - 1e-6);
      worst_closed_form =
          std::max(worst_closed_form, std::abs(chebyshev_t(n, x) - std::cos(n * std::acos(x))));
    }

    const std::string tag = " N=" + std::to_string(n);
    report.checks.push_back({"preimage-reconstruction" + tag,
                             worst_reconstruction < options.reconstruction_tol,
                             "max |T(p) - x'| = " + sci(worst_reconstruction)});
    report.checks.push_back({"preimage-sums" + tag, worst_sum < options.sum_tol,
                             "max over 1<=M<N of |sum T_M(p)| = " + sci(worst_sum)});
    report.checks.push_back({"weight-constancy" + tag,
                             weights_consistent && worst_weight < options.weight_rel_tol,
                             "max relative deviation = " + sci(worst_weight)});
    report.checks.push_back({"density-invariance" + tag,
                             worst_invariance < options.invariance_rel_tol,
                             "max relative |sum h/|T'| - h(x')| = " + sci(worst_invariance)});
    report.checks.push_back({"recurrence-closed-form" + tag,
                             worst_closed_form < options.closed_form_tol,
                             "max |recurrence - cos(N acos x)| = " + sci(worst_closed_form)});
  }
  return report;
}

VerificationReport run_full_verification(const LemmaSuiteOptions& options,
                                         const SolutionOverrides& overrides) {
  VerificationReport report = run_lemma_suite(options);
  VerificationReport residuals = verify_residuals(overrides);
  report.checks.insert(report.checks.end(), residuals.checks.begin(), residuals.checks.end());
  return report;
}

}  // namespace kickdyn
