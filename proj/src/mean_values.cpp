#include "aliquot/mean_values.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "aliquot/kahan.hpp"

namespace aliquot {

const char* stat_name(MeanStat stat) {
  switch (stat) {
    case MeanStat::sigma: return "sigma";
    case MeanStat::s_sigma: return "S_sigma";
    case MeanStat::s_s: return "S_s";
    case MeanStat::ratio_s_s: return "S_s_over_n";
  }
  return "?";
}

namespace {

inline void add_checked(u64& acc, u64 v, u64 n) {
  if (__builtin_add_overflow(acc, v, &acc)) throw OverflowError(n);
}

double log_pow(u64 x, int e) { return std::pow(std::log(static_cast<double>(x)), e); }

MeanCheckpoint make_int_checkpoint(MeanStat stat, u64 x, u64 sum, double limit, int log_exp) {
  MeanCheckpoint cp;
  cp.x = x;
  cp.stat = stat;
  cp.sum_int = Int(sum);
  cp.sum_value = static_cast<double>(sum);
  cp.mode = SumMode::exact_rational;  // integer sums are always exact
  cp.mean = cp.sum_value / static_cast<double>(x);
  cp.limit_constant = limit;
  cp.normalized_error =
      std::abs(cp.mean - limit * static_cast<double>(x)) / log_pow(x, log_exp);
  return cp;
}

struct LadderState {
  u64 sum_sigma = 0;
  u64 sum_s_sigma = 0;
  u64 sum_s_s = 0;
  Rat ratio_exact{0};
  KahanSum ratio_kahan;
  bool exact_alive = true;
};

MeanCheckpoint make_ratio_checkpoint(u64 x, const LadderState& st) {
  MeanCheckpoint cp;
  cp.x = x;
  cp.stat = MeanStat::ratio_s_s;
  if (st.exact_alive) {
    cp.sum_rat = st.ratio_exact;
    cp.sum_value = st.ratio_exact.get_d();
    cp.mode = SumMode::exact_rational;
  } else {
    cp.sum_value = st.ratio_kahan.sum();
    cp.mode = SumMode::compensated_double;
  }
  cp.mean = cp.sum_value / static_cast<double>(x);
  cp.limit_constant = Constants::c_mean_ratio;
  // the sum itself tracks c * x with O((log x)^3) error
  cp.normalized_error =
      std::abs(cp.sum_value - cp.limit_constant * static_cast<double>(x)) / log_pow(x, 3);
  return cp;
}

}  // namespace

std::vector<MeanCheckpoint> mean_checkpoints(const std::vector<u64>& xs, const MeanOptions& opt) {
  if (xs.empty()) return {};
  std::vector<u64> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() < 1) throw std::invalid_argument("mean_checkpoints: x must be >= 1");

  std::vector<MeanCheckpoint> out;
  LadderState st;
  std::size_t next = 0;

  sieve_segments(1, sorted.back(), opt.sieve, [&](const SegmentView& seg) {
    for (u64 n = seg.lo; n <= seg.hi; ++n) {
      u64 i = n - seg.lo;
      u64 sig = seg.sigma[i];
      u64 ssig = seg.s_sigma[i];
      u64 ss = ssig - sig;
      add_checked(st.sum_sigma, sig, n);
      add_checked(st.sum_s_sigma, ssig, n);
      add_checked(st.sum_s_s, ss, n);
      if (st.exact_alive && n <= opt.exact_ratio_threshold)
        st.ratio_exact += make_rat(Int(ss), Int(n));
      else
        st.exact_alive = false;
      st.ratio_kahan.add(static_cast<double>(ss) / static_cast<double>(n));

      while (next < sorted.size() && sorted[next] == n) {
        u64 x = sorted[next++];
        out.push_back(
            make_int_checkpoint(MeanStat::sigma, x, st.sum_sigma, Constants::c_mean_sigma, 1));
        out.push_back(make_int_checkpoint(MeanStat::s_sigma, x, st.sum_s_sigma,
                                          Constants::c_mean_s_sigma, 2));
        out.push_back(
            make_int_checkpoint(MeanStat::s_s, x, st.sum_s_s, Constants::c_mean_ss, 2));
        out.push_back(make_ratio_checkpoint(x, st));
      }
    }
  });
  return out;
}

namespace {

MeanCheckpoint single(MeanStat stat, u64 x, const MeanOptions& opt) {
  auto cps = mean_checkpoints({x}, opt);
  for (auto& cp : cps)
    if (cp.stat == stat) return cp;
  throw std::logic_error("mean checkpoint missing");
}

}  // namespace

MeanCheckpoint mean_sigma(u64 x, const MeanOptions& opt) { return single(MeanStat::sigma, x, opt); }
MeanCheckpoint mean_s_sigma(u64 x, const MeanOptions& opt) {
  return single(MeanStat::s_sigma, x, opt);
}
MeanCheckpoint mean_s_s(u64 x, const MeanOptions& opt) { return single(MeanStat::s_s, x, opt); }
MeanCheckpoint mean_ratio_s_s(u64 x, const MeanOptions& opt) {
  return single(MeanStat::ratio_s_s, x, opt);
}

std::vector<u64> parse_checkpoints(const std::string& spec) {
  std::vector<u64> xs;
  if (spec.rfind("decades:", 0) == 0) {
    auto rest = spec.substr(8);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("checkpoints: expected decades:<lo>:<hi>");
    u64 lo = parse_count(rest.substr(0, colon));
    u64 hi = parse_count(rest.substr(colon + 1));
    if (lo < 1 || lo > hi) throw std::invalid_argument("checkpoints: need 1 <= lo <= hi");
    for (u64 x = lo; x <= hi; x *= 10) {
      xs.push_back(x);
      if (x > hi / 10) break;  // would step past hi anyway
    }
    return xs;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    std::string tok =
        comma == std::string::npos ? spec.substr(pos) : spec.substr(pos, comma - pos);
    xs.push_back(parse_count(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return xs;
}

void write_mean_csv(std::ostream& out, const std::vector<MeanCheckpoint>& checkpoints) {
  out << "x,statistic,partial_sum,mean,limit,normalized_error\n";
  char buf[96];
  for (const auto& cp : checkpoints) {
    out << cp.x << ',' << stat_name(cp.stat) << ',';
    if (cp.stat != MeanStat::ratio_s_s)
      out << to_decimal(cp.sum_int);
    else if (cp.mode == SumMode::exact_rational)
      out << to_decimal(cp.sum_rat.get_num()) << '/' << to_decimal(cp.sum_rat.get_den());
    else {
      std::snprintf(buf, sizeof(buf), "%.17g", cp.sum_value);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g\n", cp.mean, cp.limit_constant,
                  cp.normalized_error);
    out << buf;
  }
}

}  // namespace aliquot
