#include "aliquot/edf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace aliquot {

EdfSample build_edf(u64 limit, const SieveOptions& opt) {
  if (limit < 1) throw std::invalid_argument("build_edf: limit must be >= 1");
  EdfSample sample;
  sample.limit = limit;
  sample.values.reserve(limit);
  sieve_segments(1, limit, opt, [&](const SegmentView& seg) {
    for (u64 n = seg.lo; n <= seg.hi; ++n) {
      u64 i = n - seg.lo;
      sample.values.push_back(static_cast<double>(seg.s_sigma[i] - seg.sigma[i]) /
                              static_cast<double>(n));
    }
  });
  std::sort(sample.values.begin(), sample.values.end());
  return sample;
}

EdfSample build_edf(const ArithmeticTable& table) {
  if (table.lo != 1) throw std::invalid_argument("build_edf: table must start at n = 1");
  EdfSample sample;
  sample.limit = table.hi;
  sample.values.reserve(table.hi);
  for (u64 n = 1; n <= table.hi; ++n)
    sample.values.push_back(static_cast<double>(table.s_s[n - 1]) / static_cast<double>(n));
  std::sort(sample.values.begin(), sample.values.end());
  return sample;
}

double edf_at(const EdfSample& sample, double x) {
  auto it = std::upper_bound(sample.values.begin(), sample.values.end(), x);
  return static_cast<double>(it - sample.values.begin()) / static_cast<double>(sample.limit);
}

ClusterReport max_jump(const EdfSample& sample, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("max_jump: eps must be positive");
  const auto& v = sample.values;
  ClusterReport report;
  report.epsilon = eps;
  std::size_t lo = 0, hi = 0, best = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double c = v[i];
    while (lo < v.size() && v[lo] <= c - eps) ++lo;      // open left end
    while (hi < v.size() && v[hi] < c + eps) ++hi;       // open right end
    std::size_t count = hi - lo;
    if (count > best) {
      best = count;
      report.argmax_center = c;
    }
  }
  report.max_window_density = static_cast<double>(best) / static_cast<double>(sample.limit);
  return report;
}

double kolmogorov_distance(const EdfSample& a, const EdfSample& b) {
  const auto& va = a.values;
  const auto& vb = b.values;
  double na = static_cast<double>(a.limit), nb = static_cast<double>(b.limit);
  std::size_t i = 0, j = 0;
  double dist = 0;
  while (i < va.size() || j < vb.size()) {
    double v;
    if (j >= vb.size() || (i < va.size() && va[i] <= vb[j]))
      v = va[i];
    else
      v = vb[j];
    while (i < va.size() && va[i] <= v) ++i;
    while (j < vb.size() && vb[j] <= v) ++j;
    double d = std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb);
    if (d > dist) dist = d;
  }
  return dist;
}

void write_edf_grid_csv(std::ostream& out, const EdfSample& sample, double lo, double hi,
                        double step) {
  if (!(step > 0) || hi < lo) throw std::invalid_argument("edf grid: need lo <= hi, step > 0");
  out << "x,F\n";
  char line[64];
  for (u64 k = 0;; ++k) {
    double x = lo + static_cast<double>(k) * step;
    if (x > hi) break;
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", x, edf_at(sample, x));
    out << line;
  }
}

}  // namespace aliquot
