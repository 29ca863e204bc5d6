#pragma once

#include <cmath>

namespace polydet {

/// Neumaier compensated summation.
template <class Real = double>
class CompensatedSum {
 public:
  void add(Real x) noexcept {
    const Real t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(Real x) noexcept {
    add(x);
    return *this;
  }
  Real value() const noexcept { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

}  // namespace polydet
