#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aliquot/arith.hpp"

namespace aliquot {

// Moments mu_k of S_s(n)/n by two independent routes:
//   empirical  (1/x) sum_{n<=x} (S_s(n)/n)^k  from the exact sieve, and
//   Euler      the Binomial expansion (S_s/n)^k = sum_j C(k,j)(-1)^j h_{k,j}
//              with h_{k,j}(n) = sigma(n)^j S_sigma(n)^{k-j} / n^k multiplicative,
//              each mean from the truncated Wintner product
//              prod_p (1 - 1/p) sum_nu h(p^nu) p^-nu.
// Plus the Erdos-Wintner / Wintner series diagnostics that justify the route.

struct MomentSums {
  u64 x = 0;
  std::vector<double> mu;      // mu[k-1], k = 1..kmax, ratios S_s(n)/n
  std::vector<double> mu_phi;  // same powers of n/phi(n); empty unless requested
};

// One streaming pass; snapshot points must be >= 1 and are returned sorted.
std::vector<MomentSums> empirical_moment_sums(u32 kmax, const std::vector<u64>& xs,
                                              bool with_phi, const SieveOptions& opt = {});

double empirical_moment(u32 k, u64 x, const SieveOptions& opt = {});

// h_{k,j} at a prime power, (sigma(p^nu)/p^nu)^j (S_sigma(p^nu)/p^nu)^(k-j).
double h_value(u32 k, u32 j, double p, u32 nu);
Rat h_value_exact(u32 k, u32 j, const Int& p, u32 nu);

struct EulerMean {
  double estimate = 0;
  double tail_inner = 0;  // relative, truncation of the nu sums
  double tail_outer = 0;  // relative, primes beyond P (Mertens-type bound)
};

// Truncated Wintner mean of h_{k,j}: primes <= prime_bound, nu <= nu_bound.
EulerMean euler_mean(u32 k, u32 j, u64 prime_bound, u32 nu_bound);

struct MomentTerm {
  u32 j = 0;
  u64 binom = 0;
  int sign = 1;
  double mean = 0;
  double tail = 0;  // relative truncation of this term's mean
};

struct MomentReport {
  u32 k = 0;
  u64 x = 0;            // 0 when no empirical comparison was requested
  double empirical = 0;
  std::vector<MomentTerm> terms;
  double euler_estimate = 0;
  u64 prime_bound = 0;
  u32 nu_bound = 0;
  double tail = 0;  // aggregate absolute tail of the combination
};

struct MomentOptions {
  u64 prime_bound = 100'000;
  u32 nu_bound = 60;
  u64 empirical_x = 0;  // 0 skips the empirical column
  SieveOptions sieve;
};

MomentReport moment_via_binomial(u32 k, const MomentOptions& opt = {});

// Closed form of sum_{nu>=2} nu / p^(2 nu + 1) = (2p^2 - 1) / ((p^2-1)^2 p^3).
Rat nu_series(const Int& p);

enum class AdditiveFn {
  log_sigma_ratio,          // log(sigma(n)/n),   f(p) = log(1 + 1/p)
  log_s_sigma_ratio,        // log(S_sigma(n)/n), f(p) = log(1 + 2/p)
  log_s_sigma_over_sigma,   // f(p) = log((p+2)/(p+1))
  log_s_s_ratio             // log(S_s(n)/n),     f(p) = -log p
};

const char* additive_fn_name(AdditiveFn fn);
AdditiveFn additive_fn_from_name(const std::string& name);

enum class Trend { converging, diverging_log_log, inconclusive };

const char* trend_name(Trend t);

struct SeriesCheckpoint {
  u64 prime_bound = 0;
  double sum = 0;
};

// Partial sums of a prime series at decade checkpoints, with the trend call:
//   converging        last decade contributes < 1e-5 relative
//   diverging_log_log increments positive and least-squares slope of
//                     sum vs log log p is >= 0.1
//   inconclusive      anything else
struct SeriesTrack {
  std::string id;
  std::vector<SeriesCheckpoint> checkpoints;
  Trend trend = Trend::inconclusive;
};

struct SeriesDiagnostic {
  std::string id;
  std::vector<SeriesTrack> series;
  double fitted_c = 0;        // Wintner (i): max p^2 * summand over p <= 1e4
  bool late_bound_ok = true;  // Wintner (i): summand <= fitted_c / p^2 past 1e4
};

// Erdos-Wintner three-series partial sums for f at threshold R.
SeriesDiagnostic erdos_wintner_diagnostic(AdditiveFn fn, double r, u64 prime_bound);

// Wintner conditions (i) and (ii) for g = h_{k,j}.
SeriesDiagnostic wintner_condition_check(u32 k, u32 j, u64 prime_bound);

struct GrowthRow {
  u32 k = 0;
  double mu_k = 0;
  double log_ratio = 0;    // log(mu_k) / (k log log k)
  double carleman = 0;     // mu_{2k}^(1/2k) / k
  double mu_phi_2k = 0;    // empirical 2k-th moment of n/phi(n)
  bool phi_bound_ok = true;  // mu_k <= mu_phi_2k
  double stability = 0;    // mu_k(x) / mu_k(x/10)
};

struct GrowthTable {
  u64 x = 0;
  std::vector<GrowthRow> rows;  // k = 3..k_max (log log k needs k >= 3)
  bool log_ratio_tail_ok = true;  // no >10% consecutive rise in last three rows
  bool carleman_tail_ok = true;
};

// Diagnostic ratio tables for the moment growth; requires k_max >= 4.
GrowthTable moment_growth_check(u32 k_max, u64 x, const SieveOptions& opt = {});

std::string moment_report_to_json(const MomentReport& report);
void write_moment_csv(std::ostream& out, const MomentReport& report);
void write_series_csv(std::ostream& out, const SeriesDiagnostic& diag);
void write_growth_csv(std::ostream& out, const GrowthTable& table);

}  // namespace aliquot
