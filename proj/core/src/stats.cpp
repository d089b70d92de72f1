#include "kickdyn/stats.hpp"

#include <cmath>
#include <string>

#include "kickdyn/errors.hpp"

namespace kickdyn {

void MomentAccumulator::merge(const MomentAccumulator& other) noexcept {
  n_ += other.n_;
  s1_.merge(other.s1_);
  s2_.merge(other.s2_);
  s3_.merge(other.s3_);
  s4_.merge(other.s4_);
}

double MomentAccumulator::raw_moment(int k) const {
  if (n_ == 0) throw ArgumentError("raw_moment: empty accumulator");
  const double n = static_cast<double>(n_);
  switch (k) {
    case 1: return s1_.value() / n;
    case 2: return s2_.value() / n;
    case 3: return s3_.value() / n;
    case 4: return s4_.value() / n;
    default: throw ArgumentError("raw_moment: k must be in 1..4");
  }
}

CentralMoments central_moments(const MomentAccumulator& acc) {
  if (acc.count() < 4) {
    throw ArgumentError("central_moments: need at least 4 samples, have " +
                        std::to_string(acc.count()));
  }
  const double mu = acc.raw_moment(1);
  const double r2 = acc.raw_moment(2);
  const double r3 = acc.raw_moment(3);
  const double r4 = acc.raw_moment(4);
  const double mu2 = mu * mu;
  CentralMoments m;
  m.mean = mu;
  m.m2 = r2 - mu2;
  m.m3 = r3 - 3.0 * mu * r2 + 2.0 * mu2 * mu;
  m.m4 = r4 - 4.0 * mu * r3 + 6.0 * mu2 * r2 - 3.0 * mu2 * mu2;
  return m;
}

CentralMoments central_moments(std::span<const double> samples) {
  if (samples.size() < 4) {
    throw ArgumentError("central_moments: need at least 4 samples, have " +
                        std::to_string(samples.size()));
  }
  CompensatedSum s;
  for (double v : samples) s.add(v);
  const double n = static_cast<double>(samples.size());
  const double mu = s.value() / n;
  CompensatedSum c2, c3, c4;
  for (double v : samples) {
    const double d = v - mu;
    const double d2 = d * d;
    c2.add(d2);
    c3.add(d2 * d);
    c4.add(d2 * d2);
  }
  return {mu, c2.value() / n, c3.value() / n, c4.value() / n};
}

double kurtosis(double m2, double m4) {
  if (!(m2 > 0.0)) throw ArgumentError("kurtosis: second moment must be > 0");
  return m4 / (m2 * m2);
}

double skewness(double m2, double m3) {
  if (!(m2 > 0.0)) throw ArgumentError("skewness: second moment must be > 0");
  return m3 / std::pow(m2, 1.5);
}

EstimateWithError batch_estimate(std::span<const MomentAccumulator> batches,
                                 const std::function<double(const CentralMoments&)>& statistic) {
  if (batches.size() < 2) throw ArgumentError("batch_estimate: need at least two batches");
  MomentAccumulator pooled;
  std::vector<double> values;
  values.reserve(batches.size());
  for (const auto& b : batches) {
    pooled.merge(b);
    values.push_back(statistic(central_moments(b)));
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double b = static_cast<double>(values.size());
  const double sd = std::sqrt(ss / (b - 1.0));
  return {statistic(central_moments(pooled)), sd / std::sqrt(b)};
}

// ---------------------------------------------------------------------------

Histogram::Histogram(double lo, double hi, std::size_t bins)
    : lo_(lo), hi_(hi), width_(0.0), counts_(bins, 0) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("Histogram: need finite lo < hi");
  }
  if (bins == 0) throw ArgumentError("Histogram: need at least one bin");
  width_ = (hi - lo) / static_cast<double>(bins);
}

std::size_t Histogram::bin_index(double y) const noexcept {
  if (!(y >= lo_ && y < hi_)) return counts_.size();
  auto i = static_cast<std::size_t>((y - lo_) / width_);
  return i < counts_.size() ? i : counts_.size() - 1;
}

void Histogram::accumulate(double y) {
  if (!std::isfinite(y)) throw SimulationFault("Histogram: non-finite sample");
  const std::size_t i = bin_index(y);
  if (i == counts_.size()) {
    ++out_of_range_;
  } else {
    ++counts_[i];
    ++in_range_;
  }
}

void Histogram::merge(const Histogram& other) {
  if (other.lo_ != lo_ || other.hi_ != hi_ || other.counts_.size() != counts_.size()) {
    throw ArgumentError("Histogram::merge: incompatible binning");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  out_of_range_ += other.out_of_range_;
  in_range_ += other.in_range_;
}

double Histogram::density_at(double y) const {
  if (in_range_ == 0) throw ArgumentError("Histogram::density_at: empty histogram");
  const std::size_t i = bin_index(y);
  if (i == counts_.size()) return 0.0;
  return static_cast<double>(counts_[i]) / (static_cast<double>(in_range_) * width_);
}

std::vector<double> Histogram::densities() const {
  if (in_range_ == 0) throw ArgumentError("Histogram::densities: empty histogram");
  std::vector<double> d(counts_.size());
  const double norm = static_cast<double>(in_range_) * width_;
  for (std::size_t i = 0; i < counts_.size(); ++i) d[i] = static_cast<double>(counts_[i]) / norm;
  return d;
}

double l1_distance(const Histogram& h, const std::function<double(double)>& f) {
  if (h.in_range() == 0) throw ArgumentError("l1_distance: empty histogram");
  const auto d = h.densities();
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) total += std::abs(d[i] - f(h.bin_center(i)));
  return total * h.bin_width();
}

}  // namespace kickdyn
