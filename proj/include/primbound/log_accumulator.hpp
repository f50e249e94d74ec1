#pragma once

#include <cstddef>
#include <limits>

#include "primbound/numeric.hpp"

namespace primbound {

/// Compensated (Neumaier) sum of log-domain terms.
class LogAccumulator {
 public:
  void add(const Real& term) {
    const Real t = sum_ + term;
    if (abs(sum_) >= abs(term))
      compensation_ += (sum_ - t) + term;
    else
      compensation_ += (term - t) + sum_;
    sum_ = t;
    ++count_;
    if (abs(term) > max_abs_) max_abs_ = abs(term);
  }

  LogAccumulator& operator+=(const Real& term) {
    add(term);
    return *this;
  }

  Real value() const { return sum_ + compensation_; }
  const Real& compensation() const { return compensation_; }
  std::size_t term_count() const { return count_; }

  /// Rounding-error envelope: unit roundoff * terms * largest |term|.
  Real error_estimate() const {
    return std::numeric_limits<Real>::epsilon() * Real(count_) * max_abs_;
  }

 private:
  Real sum_ = 0;
  Real compensation_ = 0;
  Real max_abs_ = 0;
  std::size_t count_ = 0;
};

}  // namespace primbound
