#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kickdyn/analytic.hpp"
#include "kickdyn/langevin.hpp"
#include "kickdyn/lattice.hpp"
#include "kickdyn/verify.hpp"

namespace kickdyn::app {

enum ExitCode : int { kExitPass = 0, kExitFailure = 1, kExitUsage = 2 };

struct RunContext {
  std::filesystem::path out_dir = "kickdyn_out";
  unsigned threads = 0;  // 0: environment override or hardware concurrency
  std::ostream* log = nullptr;
  std::ostream* err = nullptr;
  bool write_files = true;
};

struct MapChoice {
  int order = 4;
  std::string variant = "chebyshev";  // or "ulam" (requires order 2)
  [[nodiscard]] ChaoticMap map() const;
};

struct SimulateOptions {
  MapChoice map;
  std::optional<double> lambda;
  std::optional<double> tau;
  std::uint64_t steps = 30000000;
  std::uint64_t burn_in = 10000;
  std::size_t bins = 1000;
  double lo = -3.0;
  double hi = 3.0;
  std::uint64_t seed = kDefaultSeed;
  unsigned shards = 8;
  bool reinject = true;
  bool svg = true;

  /// Exactly one of lambda/tau; default lambda 0.98 when neither is set.
  [[nodiscard]] SkewProductParams params() const;
};

struct SimulateOutcome {
  SkewProductParams params;
  TrajectoryAccumulator result;
  double l1_analytic = 0.0;
  double l1_gaussian = 0.0;
  std::vector<std::string> files;
};

[[nodiscard]] SimulateOutcome run_simulate(const SimulateOptions& options, const RunContext& ctx);

struct ExtractOptions {
  SimulateOptions sim;
  double window = 1.0;
  std::optional<std::filesystem::path> from_file;  // histogram.csv of a simulate run
  bool analytic = false;                            // feed the leading-order closed form
};

struct ExtractOutcome {
  std::vector<DensitySample> extracted;
  std::vector<double> polynomial;  // comparison polynomial at the same abscissas
  double mean_squared_deviation = 0.0;
  double max_abs_deviation = 0.0;
  std::vector<std::string> files;
};

[[nodiscard]] ExtractOutcome run_extract(const ExtractOptions& options, const RunContext& ctx);

/// Extraction from (bin_center, density) pairs, shared by all input modes.
[[nodiscard]] ExtractOutcome extract_from_samples(const std::vector<DensitySample>& samples, double tau,
                                                  const ChaoticMap& map, double window);

struct CmlOptions {
  int order = 3;
  std::vector<double> lambdas{0.6, 0.9};
  std::optional<AlphaGrid> grid;   // kurtosis scan
  std::vector<double> alphas;      // pooled-histogram runs
  std::size_t size = 100;
  std::uint64_t steps = 10000;
  std::uint64_t burn_in = 1000;
  std::size_t bins = 1000;
  double lo = -3.0;
  double hi = 3.0;
  std::uint64_t seed = kDefaultSeed;
  bool reinject = true;
  bool svg = true;

  /// Lattice size 1000, alpha step 0.005, 1e5 iterations.
  void apply_full_scale();
};

struct CmlOutcome {
  std::vector<KurtosisCell> cells;
  std::vector<std::pair<KurtosisCell, Histogram>> pooled;
  std::vector<std::string> files;
};

[[nodiscard]] CmlOutcome run_cml(const CmlOptions& options, const RunContext& ctx);

struct VerifyOptions {
  LemmaSuiteOptions lemmas;
  std::optional<std::string> inject_fault;  // equation name whose solution gets perturbed
};

/// Prints one line per check. Writes report.json when ctx.write_files.
[[nodiscard]] VerificationReport run_verify(const VerifyOptions& options, const RunContext& ctx);

struct ReplayOutcome {
  bool identical = false;
  std::vector<std::string> mismatches;
};

/// Re-runs the command recorded in a manifest into ctx.out_dir and compares
/// output digests.
[[nodiscard]] ReplayOutcome replay(const std::filesystem::path& manifest, const RunContext& ctx);

void to_json(nlohmann::json& j, const MapChoice& o);
void from_json(const nlohmann::json& j, MapChoice& o);
void to_json(nlohmann::json& j, const SimulateOptions& o);
void from_json(const nlohmann::json& j, SimulateOptions& o);
void to_json(nlohmann::json& j, const ExtractOptions& o);
void from_json(const nlohmann::json& j, ExtractOptions& o);
void to_json(nlohmann::json& j, const CmlOptions& o);
void from_json(const nlohmann::json& j, CmlOptions& o);
void to_json(nlohmann::json& j, const VerifyOptions& o);
void from_json(const nlohmann::json& j, VerifyOptions& o);

}  // namespace kickdyn::app
