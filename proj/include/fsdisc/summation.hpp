#ifndef FSDISC_SUMMATION_HPP
#define FSDISC_SUMMATION_HPP

#include <cmath>
#include <span>

namespace fsdisc {

/// Neumaier-compensated running sum. Adding the same values in the same order
/// always yields the same bits.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

}  // namespace fsdisc

#endif  // FSDISC_SUMMATION_HPP
