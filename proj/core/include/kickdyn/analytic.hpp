#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kickdyn/chebyshev.hpp"
#include "kickdyn/gauss_poly.hpp"

namespace kickdyn {

/// One term tau^{half_power/2} sqrt(2/pi) P(y) e^{-2y^2} of a stationary density.
struct CorrectionTerm {
  int half_power = 0;
  RationalPoly poly;
};

/// Truncated small-tau expansion of the stationary velocity density for one
/// driving map. terms[0] is always (0, 1); every later term integrates to zero.
struct CorrectionSet {
  ChaoticMap map;
  std::vector<CorrectionTerm> terms;
  int error_order = 0;  // remainder is O(tau^{error_order/2})

  [[nodiscard]] const RationalPoly* term(int half_power) const;
  /// Half-power of the first non-trivial correction: 1 for N = 2, 2 otherwise.
  [[nodiscard]] int leading_half_power() const;
  [[nodiscard]] const RationalPoly& leading_correction() const;
};

[[nodiscard]] CorrectionSet correction_set(const ChaoticMap& map);
[[nodiscard]] CorrectionSet correction_set(MapKind kind, int n);

/// Beyond this tau the truncated expansion is not meaningful; callers warn.
inline constexpr double kTruncationWarnTau = 0.5;

/// sqrt(2/pi) [sum_k tau^{k/2} P_k(y)] e^{-2y^2}. Not clipped: may go negative
/// in the far tail at finite tau.
[[nodiscard]] double density(const CorrectionSet& set, double tau, double y);
[[nodiscard]] double density(const ChaoticMap& map, double tau, double y);

// ---------------------------------------------------------------------------
// Inhomogeneous stationary Fokker-Planck equations for the correction terms.

enum class EquationId {
  AAlpha,  // first-order term for N = 2, source -(1/8) p0'''
  ABeta,   // second-order term for N = 2
  N4Beta,  // second-order term for N >= 4
  N3Beta,  // second-order term for N = 3
};

inline constexpr std::array<EquationId, 4> kAllEquations = {
    EquationId::AAlpha, EquationId::ABeta, EquationId::N4Beta, EquationId::N3Beta};

[[nodiscard]] std::string to_string(EquationId id);
/// Accepts "A-alpha", "A-beta", "N4-beta", "N3-beta"; throws ArgumentError.
[[nodiscard]] EquationId parse_equation_id(std::string_view text);

/// Where the source appears in its printed equation.
enum class SourceSide {
  Added,    // 0 = L f + s
  Equated,  // L f = s
};

/// Source term in units of sqrt(2/pi): the actual function is
/// prefactor * sqrt(2/pi) * source.
struct InhomogeneousSource {
  EquationId id{};
  PolyGauss source;
  SourceSide side{};
  Rational prefactor{1};
};

/// The source polynomial in the form stated with its equation.
[[nodiscard]] InhomogeneousSource source_polynomial(EquationId id);
[[nodiscard]] InhomogeneousSource source_polynomial(std::string_view id);

/// The same source rebuilt from the operator expression it comes from
/// (derivatives of p0 and of the first-order correction).
[[nodiscard]] PolyGauss assemble_source(EquationId id);

/// Stated stationary solution (polynomial part) of each equation.
[[nodiscard]] RationalPoly stated_solution(EquationId id);

/// L f + s or L f - s depending on the side; zero iff f solves the equation.
[[nodiscard]] PolyGauss residual(const PolyGauss& solution, const InhomogeneousSource& source);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] std::vector<std::string> failures() const;
};

/// Overrides for negative-control runs: replaces a stated solution.
using SolutionOverrides = std::map<EquationId, RationalPoly>;

/// Exact residual, source-assembly, solver and normalisation checks for all
/// four equations, plus normalisation of every correction set.
[[nodiscard]] VerificationReport verify_residuals(const SolutionOverrides& overrides = {});

// ---------------------------------------------------------------------------
// Moments.

/// Power series in sqrt(tau): coeffs[k] multiplies tau^{k/2}.
struct TauSeries {
  std::vector<Rational> coeffs;
  [[nodiscard]] Rational coeff(std::size_t half_power) const;
  [[nodiscard]] double at(double tau) const;
};

struct MomentPrediction {
  ChaoticMap map;
  TauSeries mean;
  TauSeries variance;
  TauSeries third_central;
  TauSeries fourth_central;
  // Expansions (constant, tau^{1/2}, tau) of the normalised moments.
  std::array<Rational, 3> skewness_expansion;
  std::array<Rational, 3> kurtosis_expansion;

  [[nodiscard]] double variance_at(double tau) const { return variance.at(tau); }
  /// m3 / m2^{3/2} with both series evaluated at tau.
  [[nodiscard]] double skewness_at(double tau) const;
  /// m4 / m2^2 with both series evaluated at tau.
  [[nodiscard]] double kurtosis_at(double tau) const;
};

/// Integrates y, y^2, y^3, y^4 against the correction set with the exact
/// Gaussian-moment engine.
[[nodiscard]] MomentPrediction predicted_moments(const ChaoticMap& map);

// ---------------------------------------------------------------------------
// Extraction of correction polynomials from a sampled density.

struct DensitySample {
  double y = 0.0;
  double density = 0.0;
};

/// 1/2 for the order-two maps, 1 otherwise.
[[nodiscard]] double extraction_exponent(const ChaoticMap& map);

/// (sqrt(pi/2) rho(y) e^{2y^2} - 1) / tau^{exponent} for every sample with
/// |y| <= window. Throws ArgumentError for tau <= 0 or window <= 0.
[[nodiscard]] std::vector<DensitySample> extract_correction(std::span<const DensitySample> samples,
                                                            double tau, const ChaoticMap& map,
                                                            double window = 1.0);

}  // namespace kickdyn
