#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kickdyn {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    comp_ += other.comp_;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct CentralMoments {
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

/// Compensated raw power sums of y, y^2, y^3, y^4.
class MomentAccumulator {
 public:
  void add(double y) noexcept {
    const double y2 = y * y;
    ++n_;
    s1_.add(y);
    s2_.add(y2);
    s3_.add(y2 * y);
    s4_.add(y2 * y2);
  }
  void merge(const MomentAccumulator& other) noexcept;

  [[nodiscard]] std::uint64_t count() const noexcept { return n_; }
  /// Raw moment E[y^k] for k in 1..4.
  [[nodiscard]] double raw_moment(int k) const;

 private:
  std::uint64_t n_ = 0;
  CompensatedSum s1_, s2_, s3_, s4_;
};

/// Central moment estimates from raw power sums; throws ArgumentError if n < 4.
[[nodiscard]] CentralMoments central_moments(const MomentAccumulator& acc);
/// Two-pass central moments of an explicit sample; throws ArgumentError if n < 4.
[[nodiscard]] CentralMoments central_moments(std::span<const double> samples);

/// m4 / m2^2; throws ArgumentError if m2 <= 0.
[[nodiscard]] double kurtosis(double m2, double m4);
/// m3 / m2^{3/2}; throws ArgumentError if m2 <= 0.
[[nodiscard]] double skewness(double m2, double m3);
[[nodiscard]] inline double kurtosis(const CentralMoments& m) { return kurtosis(m.m2, m.m4); }
[[nodiscard]] inline double skewness(const CentralMoments& m) { return skewness(m.m2, m.m3); }

struct EstimateWithError {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Statistic estimated from the pooled sample, standard error from the spread
/// of the same statistic across independent (or long, weakly correlated)
/// batches: sd / sqrt(B). Needs at least two batches.
[[nodiscard]] EstimateWithError batch_estimate(
    std::span<const MomentAccumulator> batches,
    const std::function<double(const CentralMoments&)>& statistic);

/// Fixed-bin histogram on [lo, hi). Values outside go to out_of_range.
class Histogram {
 public:
  Histogram(double lo, double hi, std::size_t bins);

  void accumulate(double y);  // throws SimulationFault for non-finite y
  void merge(const Histogram& other);

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }
  [[nodiscard]] std::size_t bins() const noexcept { return counts_.size(); }
  [[nodiscard]] double bin_width() const noexcept { return width_; }
  [[nodiscard]] double bin_center(std::size_t i) const noexcept {
    return lo_ + (static_cast<double>(i) + 0.5) * width_;
  }
  [[nodiscard]] const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  [[nodiscard]] std::uint64_t out_of_range() const noexcept { return out_of_range_; }
  [[nodiscard]] std::uint64_t in_range() const noexcept { return in_range_; }
  [[nodiscard]] std::uint64_t total() const noexcept { return in_range_ + out_of_range_; }

  /// Bin owning y, or bins() when y is outside [lo, hi).
  [[nodiscard]] std::size_t bin_index(double y) const noexcept;

  /// counts_i / (in_range * width) for the bin containing y; 0 outside the
  /// range. Normalised over in-range samples. Throws ArgumentError if empty.
  [[nodiscard]] double density_at(double y) const;
  [[nodiscard]] std::vector<double> densities() const;

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  double lo_;
  double hi_;
  double width_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t out_of_range_ = 0;
  std::uint64_t in_range_ = 0;
};

/// sum_i |density_i - f(center_i)| * width. Throws ArgumentError if empty.
[[nodiscard]] double l1_distance(const Histogram& h, const std::function<double(double)>& f);

}  // namespace kickdyn
