#pragma once

#include <iosfwd>
#include <vector>

#include "aliquot/arith.hpp"

namespace aliquot {

// Empirical distribution of the ratios S_s(n)/n over 1 <= n <= limit.
// Each ratio is the correctly rounded double of the exact value; exactness
// claims live in the integer tables, not here.
struct EdfSample {
  u64 limit = 0;
  std::vector<double> values;  // sorted ascending, length == limit
};

struct ClusterReport {
  double epsilon = 0;
  double max_window_density = 0;  // max over centers of #{v in (c-eps, c+eps)} / limit
  double argmax_center = 0;
};

EdfSample build_edf(u64 limit, const SieveOptions& opt = {});
EdfSample build_edf(const ArithmeticTable& table);  // table must start at lo = 1

// Right-continuous step function: #{values <= x} / limit.
double edf_at(const EdfSample& sample, double x);

// Sliding open window of half-width eps; centers are the sample points.
ClusterReport max_jump(const EdfSample& sample, double eps);

// Sup-norm distance of the two empirical step functions over the merged
// breakpoint set.
double kolmogorov_distance(const EdfSample& a, const EdfSample& b);

// Two-column CSV "x,F" for x = lo, lo+step, ..., <= hi.
void write_edf_grid_csv(std::ostream& out, const EdfSample& sample, double lo, double hi,
                        double step);

}  // namespace aliquot
