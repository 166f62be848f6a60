#pragma once

namespace aliquot {

// Compensated (Kahan) accumulator for long streaming sums.
class KahanSum {
 public:
  void add(double v) {
    double y = v - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double sum() const { return sum_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

}  // namespace aliquot
