#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aliquot/arith.hpp"

namespace aliquot {

// Limit constants for the running means, all double evaluations of pi:
//   M_x(sigma)   -> zeta(2)/2 * x            error O(log x)
//   M_x(S_sigma) -> zeta(2)^2/2 * x          error O((log x)^2)
//   M_x(S_s)     -> zeta(2)(zeta(2)-1)/2 * x error O((log x)^2)
//   (1/x) sum S_s(n)/n -> zeta(2)(zeta(2)-1) error O((log x)^3 / x)
struct Constants {
  static constexpr double zeta2 = 1.6449340668482264;          // pi^2/6
  static constexpr double zeta2_sq = zeta2 * zeta2;            // pi^4/36
  static constexpr double c_mean_sigma = zeta2 / 2;
  static constexpr double c_mean_s_sigma = zeta2_sq / 2;
  static constexpr double c_mean_ss = zeta2 * (zeta2 - 1) / 2;  // 0.5304370087...
  static constexpr double c_mean_ratio = zeta2 * (zeta2 - 1);   // 1.0608740174...
};

enum class MeanStat { sigma, s_sigma, s_s, ratio_s_s };

enum class SumMode { exact_rational, compensated_double };

struct MeanCheckpoint {
  u64 x = 0;
  MeanStat stat = MeanStat::sigma;
  Int sum_int;             // exact partial sum (integer statistics)
  Rat sum_rat;             // exact partial sum (ratio statistic, exact mode)
  double sum_value = 0;    // the partial sum as a double, whatever the mode
  SumMode mode = SumMode::exact_rational;
  double mean = 0;             // sum / x
  double limit_constant = 0;   // the applicable constant above
  double normalized_error = 0; // |error| / (log x)^e, e per the table above
};

const char* stat_name(MeanStat stat);

struct MeanOptions {
  SieveOptions sieve;
  u64 exact_ratio_threshold = 10'000;  // exact rational ratio sums up to here
};

// One streaming pass; checkpoints must be increasing and cover all four
// statistics at every requested x.
std::vector<MeanCheckpoint> mean_checkpoints(const std::vector<u64>& xs,
                                             const MeanOptions& opt = {});

MeanCheckpoint mean_sigma(u64 x, const MeanOptions& opt = {});
MeanCheckpoint mean_s_sigma(u64 x, const MeanOptions& opt = {});
MeanCheckpoint mean_s_s(u64 x, const MeanOptions& opt = {});
MeanCheckpoint mean_ratio_s_s(u64 x, const MeanOptions& opt = {});

// "decades:1e3:1e7" or a comma list of counts.
std::vector<u64> parse_checkpoints(const std::string& spec);

// CSV rows "x,statistic,partial_sum,mean,limit,normalized_error".
void write_mean_csv(std::ostream& out, const std::vector<MeanCheckpoint>& checkpoints);

}  // namespace aliquot
