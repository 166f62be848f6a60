#include "aliquot/moments.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "aliquot/kahan.hpp"
#include "aliquot/primes.hpp"

namespace aliquot {

std::vector<MomentSums> empirical_moment_sums(u32 kmax, const std::vector<u64>& xs,
                                              bool with_phi, const SieveOptions& opt) {
  if (kmax < 1) throw std::invalid_argument("empirical_moment_sums: kmax must be >= 1");
  if (xs.empty()) return {};
  std::vector<u64> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() < 1) throw std::invalid_argument("empirical_moment_sums: x must be >= 1");

  std::vector<KahanSum> ratio_pows(kmax);
  std::vector<KahanSum> phi_pows(with_phi ? kmax : 0);
  std::vector<MomentSums> out;
  std::size_t next = 0;

  sieve_segments(1, sorted.back(), opt, [&](const SegmentView& seg) {
    for (u64 n = seg.lo; n <= seg.hi; ++n) {
      u64 i = n - seg.lo;
      double dn = static_cast<double>(n);
      double ratio = static_cast<double>(seg.s_sigma[i] - seg.sigma[i]) / dn;
      double pw = ratio;
      for (u32 k = 0; k < kmax; ++k, pw *= ratio) ratio_pows[k].add(pw);
      if (with_phi) {
        double pr = dn / static_cast<double>(seg.phi[i]);
        double pp = pr;
        for (u32 k = 0; k < kmax; ++k, pp *= pr) phi_pows[k].add(pp);
      }
      while (next < sorted.size() && sorted[next] == n) {
        MomentSums ms;
        ms.x = sorted[next++];
        double dx = static_cast<double>(ms.x);
        ms.mu.resize(kmax);
        for (u32 k = 0; k < kmax; ++k) ms.mu[k] = ratio_pows[k].sum() / dx;
        if (with_phi) {
          ms.mu_phi.resize(kmax);
          for (u32 k = 0; k < kmax; ++k) ms.mu_phi[k] = phi_pows[k].sum() / dx;
        }
        out.push_back(std::move(ms));
      }
    }
  });
  return out;
}

double empirical_moment(u32 k, u64 x, const SieveOptions& opt) {
  return empirical_moment_sums(k, {x}, false, opt).front().mu[k - 1];
}

namespace {

// sigma(p^nu)/p^nu and S_sigma(p^nu)/p^nu through the prime-power closed
// forms, evaluated with negative powers only (stable for any nu).
struct PrimeRatios {
  double s1;    // p/(p-1) = 1 + 1/(p-1)
  double c1;    // 1/(p-1)
  double c2;    // p/(p-1)^2
  double pinv;  // 1/p

  explicit PrimeRatios(double p)
      : s1(p / (p - 1)), c1(1 / (p - 1)), c2(p / ((p - 1) * (p - 1))), pinv(1 / p) {}

  double sigma_ratio(double pinv_nu) const { return s1 - c1 * pinv_nu; }
  double s_sigma_ratio(double pinv_nu, u32 nu) const {
    return s1 * s1 - pinv_nu * (static_cast<double>(nu + 1) * c1 + c2);
  }
};

void check_kj(u32 k, u32 j) {
  if (j > k) throw std::invalid_argument("h_{k,j}: requires j <= k");
}

}  // namespace

double h_value(u32 k, u32 j, double p, u32 nu) {
  check_kj(k, j);
  if (!(p >= 2)) throw std::invalid_argument("h_value: p must be >= 2");
  PrimeRatios pr(p);
  double pinv_nu = std::pow(pr.pinv, static_cast<double>(nu));
  return std::pow(pr.sigma_ratio(pinv_nu), static_cast<double>(j)) *
         std::pow(pr.s_sigma_ratio(pinv_nu, nu), static_cast<double>(k - j));
}

Rat h_value_exact(u32 k, u32 j, const Int& p, u32 nu) {
  check_kj(k, j);
  Int pnu;
  mpz_pow_ui(pnu.get_mpz_t(), p.get_mpz_t(), nu);
  Rat sr = make_rat(sigma_prime_power(p, nu), pnu);
  Rat ssr = make_rat(s_sigma_prime_power(p, nu), pnu);
  Rat out(1);
  for (u32 i = 0; i < j; ++i) out *= sr;
  for (u32 i = 0; i < k - j; ++i) out *= ssr;
  return out;
}

EulerMean euler_mean(u32 k, u32 j, u64 prime_bound, u32 nu_bound) {
  check_kj(k, j);
  if (prime_bound < 2) throw std::invalid_argument("euler_mean: prime bound must be >= 2");
  if (nu_bound < 2) throw std::invalid_argument("euler_mean: nu bound must be >= 2");

  EulerMean out;
  out.estimate = 1.0;
  auto flags = prime_flags(prime_bound);
  for (u64 p = 2; p <= prime_bound; ++p) {
    if (!flags[p]) continue;
    PrimeRatios pr(static_cast<double>(p));
    // h(p^nu) <= hmax = (p/(p-1))^(2k-j) for every nu, so terms sit under a
    // geometric envelope; anything above it means the function is not what
    // Wintner's theorem was checked for
    double hmax = std::pow(pr.s1, static_cast<double>(2 * k - j));
    double inner = 0;
    double pinv_nu = 1.0;
    u32 last_nu = 0;
    for (u32 nu = 0; nu <= nu_bound; ++nu) {
      double term = std::pow(pr.sigma_ratio(pinv_nu), static_cast<double>(j)) *
                    std::pow(pr.s_sigma_ratio(pinv_nu, nu), static_cast<double>(k - j)) * pinv_nu;
      if (term > hmax * pinv_nu * (1 + 1e-12))
        throw std::runtime_error("euler_mean: inner sum escapes its geometric envelope");
      inner += term;
      last_nu = nu;
      if (nu >= 2 && term < inner * 1e-19) break;
      pinv_nu *= pr.pinv;
    }
    double factor = (1 - pr.pinv) * inner;
    out.estimate *= factor;
    // everything past last_nu is below hmax * pinv^(last_nu+1) / (1 - 1/p)
    double dropped = hmax * std::pow(pr.pinv, static_cast<double>(last_nu + 1)) / (1 - pr.pinv);
    out.tail_inner += dropped / inner;
  }
  // primes beyond P: sum |g(p)-1|/p <= K sum_{p>P} p^-2 < 2K/(P log P),
  // K = P (g(P) - 1) dominates p (g(p)-1) for p >= P
  double dp = static_cast<double>(prime_bound);
  double g_at_p = std::pow(1 + 1 / dp, static_cast<double>(j)) *
                  std::pow(1 + 2 / dp, static_cast<double>(k - j));
  double big_k = dp * (g_at_p - 1);
  out.tail_outer = 2 * big_k / (dp * std::log(dp));
  return out;
}

namespace {

u64 binomial_u64(u32 k, u32 j) {
  unsigned __int128 r = 1;
  for (u32 i = 1; i <= j; ++i) {
    r = r * (k - j + i) / i;
    if (r > ~u64(0)) throw std::overflow_error("binomial exceeds 64 bits");
  }
  return static_cast<u64>(r);
}

}  // namespace

MomentReport moment_via_binomial(u32 k, const MomentOptions& opt) {
  if (k < 1) throw std::invalid_argument("moment_via_binomial: k must be >= 1");
  // Wintner hypotheses first: both condition series must look convergent
  for (u32 j = 0; j <= k; ++j) {
    SeriesDiagnostic wd = wintner_condition_check(k, j, 10'000);
    for (const auto& track : wd.series)
      if (track.trend == Trend::diverging_log_log)
        throw std::runtime_error("moment_via_binomial: Wintner condition fails for j = " +
                                 std::to_string(j));
  }

  MomentReport report;
  report.k = k;
  report.prime_bound = opt.prime_bound;
  report.nu_bound = opt.nu_bound;
  double estimate = 0;
  for (u32 j = 0; j <= k; ++j) {
    EulerMean em = euler_mean(k, j, opt.prime_bound, opt.nu_bound);
    MomentTerm term;
    term.j = j;
    term.binom = binomial_u64(k, j);
    term.sign = (j % 2 == 0) ? 1 : -1;
    term.mean = em.estimate;
    term.tail = em.tail_inner + em.tail_outer;
    estimate += term.sign * static_cast<double>(term.binom) * term.mean;
    report.tail += static_cast<double>(term.binom) * std::abs(term.mean) * term.tail;
    report.terms.push_back(term);
  }
  report.euler_estimate = estimate;
  if (opt.empirical_x > 0) {
    report.x = opt.empirical_x;
    report.empirical = empirical_moment(k, opt.empirical_x, opt.sieve);
  }
  return report;
}

Rat nu_series(const Int& p) {
  if (p < 2) throw std::invalid_argument("nu_series: p must be >= 2");
  Int p2 = p * p;
  Int den = (p2 - 1) * (p2 - 1) * p * p * p;
  return make_rat(2 * p2 - 1, den);
}

const char* additive_fn_name(AdditiveFn fn) {
  switch (fn) {
    case AdditiveFn::log_sigma_ratio: return "log-sigma-ratio";
    case AdditiveFn::log_s_sigma_ratio: return "log-Ssigma-ratio";
    case AdditiveFn::log_s_sigma_over_sigma: return "log-Ssigma-over-sigma";
    case AdditiveFn::log_s_s_ratio: return "log-Ss-ratio";
  }
  return "?";
}

AdditiveFn additive_fn_from_name(const std::string& name) {
  for (AdditiveFn fn : {AdditiveFn::log_sigma_ratio, AdditiveFn::log_s_sigma_ratio,
                        AdditiveFn::log_s_sigma_over_sigma, AdditiveFn::log_s_s_ratio})
    if (name == additive_fn_name(fn)) return fn;
  throw std::invalid_argument("unknown additive function '" + name + "'");
}

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::converging: return "converging";
    case Trend::diverging_log_log: return "diverging-log-log";
    case Trend::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Converged when the last decade of primes moves the sum by less than this,
// relative to the total.
constexpr double kConvergedRelTail = 1e-5;

Trend classify(const std::vector<SeriesCheckpoint>& cps) {
  if (cps.size() < 2) return Trend::inconclusive;
  double last = cps.back().sum;
  double prev = cps[cps.size() - 2].sum;
  double delta = std::abs(last - prev);
  if (delta <= kConvergedRelTail * std::max(std::abs(last), 1e-300)) return Trend::converging;
  if (cps.size() >= 3) {
    bool increasing = true;
    for (std::size_t i = 1; i < cps.size(); ++i)
      if (cps[i].sum <= cps[i - 1].sum) increasing = false;
    // least squares of sum against log log bound
    double su = 0, ss = 0, suu = 0, sus = 0;
    double n = static_cast<double>(cps.size());
    for (const auto& cp : cps) {
      double u = std::log(std::log(static_cast<double>(cp.prime_bound)));
      su += u;
      ss += cp.sum;
      suu += u * u;
      sus += u * cp.sum;
    }
    double slope = (n * sus - su * ss) / (n * suu - su * su);
    if (increasing && slope >= 0.1) return Trend::diverging_log_log;
  }
  return Trend::inconclusive;
}

std::vector<u64> decade_bounds(u64 prime_bound) {
  std::vector<u64> bounds;
  for (u64 b = 1000; b < prime_bound; b *= 10) bounds.push_back(b);
  bounds.push_back(prime_bound);
  return bounds;
}

}  // namespace

SeriesDiagnostic erdos_wintner_diagnostic(AdditiveFn fn, double r, u64 prime_bound) {
  if (!(r > 0)) throw std::invalid_argument("erdos_wintner_diagnostic: R must be positive");
  if (prime_bound < 2) throw std::invalid_argument("erdos_wintner_diagnostic: bad prime bound");

  SeriesDiagnostic diag;
  diag.id = std::string(additive_fn_name(fn)) + ", R=" + std::to_string(r);
  diag.series.resize(3);
  diag.series[0].id = "i";    // sum 1/p over |f(p)| > R
  diag.series[1].id = "ii";   // sum f(p)^2/p over |f(p)| <= R
  diag.series[2].id = "iii";  // sum f(p)/p over |f(p)| <= R

  auto f_at = [fn](double p) {
    switch (fn) {
      case AdditiveFn::log_sigma_ratio: return std::log1p(1 / p);
      case AdditiveFn::log_s_sigma_ratio: return std::log1p(2 / p);
      case AdditiveFn::log_s_sigma_over_sigma: return std::log((p + 2) / (p + 1));
      case AdditiveFn::log_s_s_ratio: return -std::log(p);
    }
    return 0.0;
  };

  auto bounds = decade_bounds(prime_bound);
  auto flags = prime_flags(prime_bound);
  KahanSum s1, s2, s3;
  std::size_t bi = 0;
  for (u64 p = 2; p <= prime_bound; ++p) {
    while (bi < bounds.size() && bounds[bi] < p) {
      diag.series[0].checkpoints.push_back({bounds[bi], s1.sum()});
      diag.series[1].checkpoints.push_back({bounds[bi], s2.sum()});
      diag.series[2].checkpoints.push_back({bounds[bi], s3.sum()});
      ++bi;
    }
    if (!flags[p]) continue;
    double dp = static_cast<double>(p);
    double v = f_at(dp);
    if (std::abs(v) > r)
      s1.add(1 / dp);
    else {
      s2.add(v * v / dp);
      s3.add(v / dp);
    }
  }
  while (bi < bounds.size()) {
    diag.series[0].checkpoints.push_back({bounds[bi], s1.sum()});
    diag.series[1].checkpoints.push_back({bounds[bi], s2.sum()});
    diag.series[2].checkpoints.push_back({bounds[bi], s3.sum()});
    ++bi;
  }
  for (auto& track : diag.series) track.trend = classify(track.checkpoints);
  return diag;
}

SeriesDiagnostic wintner_condition_check(u32 k, u32 j, u64 prime_bound) {
  check_kj(k, j);
  if (prime_bound < 2) throw std::invalid_argument("wintner_condition_check: bad prime bound");

  SeriesDiagnostic diag;
  diag.id = "wintner h_{" + std::to_string(k) + "," + std::to_string(j) + "}";
  diag.series.resize(2);
  diag.series[0].id = "i";   // sum |g(p)-1|/p
  diag.series[1].id = "ii";  // sum_p sum_{nu>=2} |g(p^nu)-g(p^(nu-1))|/p^nu

  auto bounds = decade_bounds(prime_bound);
  auto flags = prime_flags(prime_bound);
  KahanSum s1, s2;
  std::size_t bi = 0;
  for (u64 p = 2; p <= prime_bound; ++p) {
    while (bi < bounds.size() && bounds[bi] < p) {
      diag.series[0].checkpoints.push_back({bounds[bi], s1.sum()});
      diag.series[1].checkpoints.push_back({bounds[bi], s2.sum()});
      ++bi;
    }
    if (!flags[p]) continue;
    double dp = static_cast<double>(p);
    double summand_i =
        std::abs(std::pow(1 + 1 / dp, static_cast<double>(j)) *
                     std::pow(1 + 2 / dp, static_cast<double>(k - j)) -
                 1) /
        dp;
    s1.add(summand_i);
    if (p <= 10'000) diag.fitted_c = std::max(diag.fitted_c, dp * dp * summand_i);
    else if (summand_i > diag.fitted_c / (dp * dp) * (1 + 1e-9)) diag.late_bound_ok = false;

    double inner = 0;
    double prev_h = h_value(k, j, dp, 1);
    double pinv_nu = 1 / (dp * dp);  // p^-nu at nu = 2
    for (u32 nu = 2; nu <= 60; ++nu, pinv_nu /= dp) {
      double h = h_value(k, j, dp, nu);
      double term = std::abs(h - prev_h) * pinv_nu;
      inner += term;
      prev_h = h;
      if (term < 1e-22) break;
    }
    s2.add(inner);
  }
  while (bi < bounds.size()) {
    diag.series[0].checkpoints.push_back({bounds[bi], s1.sum()});
    diag.series[1].checkpoints.push_back({bounds[bi], s2.sum()});
    ++bi;
  }
  for (auto& track : diag.series) track.trend = classify(track.checkpoints);
  return diag;
}

GrowthTable moment_growth_check(u32 k_max, u64 x, const SieveOptions& opt) {
  if (k_max < 4) throw std::invalid_argument("moment_growth_check: k_max must be >= 4");
  if (x < 100) throw std::invalid_argument("moment_growth_check: x too small");

  auto sums = empirical_moment_sums(2 * k_max, {x / 10, x}, true, opt);
  const MomentSums& small = sums.front();
  const MomentSums& full = sums.back();

  GrowthTable table;
  table.x = x;
  for (u32 k = 3; k <= k_max; ++k) {
    GrowthRow row;
    row.k = k;
    row.mu_k = full.mu[k - 1];
    row.log_ratio = std::log(row.mu_k) /
                    (static_cast<double>(k) * std::log(std::log(static_cast<double>(k))));
    row.carleman = std::pow(full.mu[2 * k - 1], 1.0 / (2.0 * k)) / static_cast<double>(k);
    row.mu_phi_2k = full.mu_phi[2 * k - 1];
    row.phi_bound_ok = row.mu_k <= row.mu_phi_2k * (1 + 1e-9);
    row.stability = row.mu_k / small.mu[k - 1];
    table.rows.push_back(row);
  }

  auto tail_ok = [&](auto field) {
    if (table.rows.size() < 3) return true;
    std::size_t n = table.rows.size();
    for (std::size_t i = n - 2; i < n; ++i) {
      double prev = field(table.rows[i - 1]);
      double cur = field(table.rows[i]);
      if (cur > prev * 1.10) return false;
    }
    return true;
  };
  table.log_ratio_tail_ok = tail_ok([](const GrowthRow& r) { return r.log_ratio; });
  table.carleman_tail_ok = tail_ok([](const GrowthRow& r) { return r.carleman; });
  return table;
}

// --- reports -----------------------------------------------------------------

std::string moment_report_to_json(const MomentReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["x"] = report.x;
  j["empirical"] = report.empirical;
  j["euler"] = report.euler_estimate;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& term : report.terms) {
    nlohmann::ordered_json t;
    t["j"] = term.j;
    t["binom"] = term.binom;
    t["sign"] = term.sign;
    t["mean"] = term.mean;
    t["tail"] = term.tail;
    j["terms"].push_back(std::move(t));
  }
  j["truncation"] = {{"P", report.prime_bound}, {"V", report.nu_bound}, {"tail", report.tail}};
  return j.dump(2) + "\n";
}

void write_moment_csv(std::ostream& out, const MomentReport& report) {
  out << "k,j,sign,binom,mean,tail\n";
  char buf[96];
  for (const auto& term : report.terms) {
    std::snprintf(buf, sizeof(buf), "%u,%u,%d,%llu,%.17g,%.17g\n", report.k, term.j, term.sign,
                  static_cast<unsigned long long>(term.binom), term.mean, term.tail);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", report.euler_estimate);
  out << "# euler_estimate," << buf;
  std::snprintf(buf, sizeof(buf), "%.17g", report.empirical);
  out << ",empirical," << buf << "\n";
}

void write_series_csv(std::ostream& out, const SeriesDiagnostic& diag) {
  out << "series,prime_bound,partial_sum,trend\n";
  char buf[64];
  for (const auto& track : diag.series) {
    for (const auto& cp : track.checkpoints) {
      std::snprintf(buf, sizeof(buf), "%.17g", cp.sum);
      out << track.id << ',' << cp.prime_bound << ',' << buf << ',' << trend_name(track.trend)
          << '\n';
    }
  }
}

void write_growth_csv(std::ostream& out, const GrowthTable& table) {
  out << "k,mu_k,log_ratio,carleman,mu_phi_2k,phi_bound_ok,stability\n";
  char buf[160];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%u,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", row.k, row.mu_k,
                  row.log_ratio, row.carleman, row.mu_phi_2k, row.phi_bound_ok ? 1 : 0,
                  row.stability);
    out << buf;
  }
}

}  // namespace aliquot
