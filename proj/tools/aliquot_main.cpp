// aliquot: exact divisor-sum statistics, density certificates, and
// distribution diagnostics for S_s(n) = sum of s(d) over divisors d of n.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "aliquot/arith.hpp"
#include "aliquot/dense.hpp"
#include "aliquot/edf.hpp"
#include "aliquot/mean_values.hpp"
#include "aliquot/moments.hpp"
#include "aliquot/numeric.hpp"

namespace {

using namespace aliquot;

// Output sink: stdout unless --out was given.
struct Sink {
  std::string path;
  std::ofstream file;
  std::ostream& stream() {
    if (path.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    }
    return file;
  }
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void parse_grid(const std::string& spec, double& lo, double& hi, double& step) {
  auto c1 = spec.find(':');
  auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::invalid_argument("grid: expected lo:hi:step");
  lo = std::stod(spec.substr(0, c1));
  hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  step = std::stod(spec.substr(c2 + 1));
  if (!(step > 0) || hi < lo) throw std::invalid_argument("grid: need lo <= hi and step > 0");
}

int run_sieve(const std::string& limit_s, const std::string& lo_s, const std::string& format,
              int threads, Sink& sink) {
  u64 hi = parse_count(limit_s);
  u64 lo = parse_count(lo_s);
  SieveOptions opt;
  opt.threads = threads;
  ArithmeticTable table = sieve_range(lo, hi, opt);
  if (format == "csv") {
    write_csv(sink.stream(), table);
  } else {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (u64 n = table.lo; n <= table.hi; ++n) {
      u64 i = n - table.lo;
      rows.push_back({{"n", n},
                      {"sigma", table.sigma[i]},
                      {"s", table.s[i]},
                      {"S_sigma", table.s_sigma[i]},
                      {"S_s", table.s_s[i]},
                      {"phi", table.phi[i]}});
    }
    sink.stream() << nlohmann::ordered_json{{"rows", rows}}.dump(2) << "\n";
  }
  return 0;
}

int run_edf(const std::string& limit_s, const std::string& grid, const std::string& cluster_eps,
            const std::string& ks_limit_s, Sink& sink) {
  u64 limit = parse_count(limit_s);
  EdfSample sample = build_edf(limit);
  std::ostream& out = sink.stream();
  if (!cluster_eps.empty()) {
    out << "epsilon,max_window_density,argmax_center\n";
    std::size_t pos = 0;
    while (pos <= cluster_eps.size()) {
      auto comma = cluster_eps.find(',', pos);
      std::string tok = comma == std::string::npos ? cluster_eps.substr(pos)
                                                   : cluster_eps.substr(pos, comma - pos);
      double eps = std::stod(tok);
      ClusterReport report = max_jump(sample, eps);
      out << fmt17(report.epsilon) << ',' << fmt17(report.max_window_density) << ','
          << fmt17(report.argmax_center) << "\n";
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return 0;
  }
  if (!ks_limit_s.empty()) {
    u64 other = parse_count(ks_limit_s);
    EdfSample second = build_edf(other);
    out << "n1,n2,distance\n";
    out << limit << ',' << other << ',' << fmt17(kolmogorov_distance(sample, second)) << "\n";
    return 0;
  }
  double lo, hi, step;
  parse_grid(grid, lo, hi, step);
  write_edf_grid_csv(out, sample, lo, hi, step);
  return 0;
}

int run_dense(const std::string& target_s, const std::string& eps_s, Sink& sink) {
  Rat target = parse_rational(target_s);
  Rat eps = parse_rational(eps_s);
  DenseCertificate cert = target == 0 ? approximate_zero(eps) : approximate(target, eps);
  sink.stream() << certificate_to_json(cert);
  return 0;
}

int run_verify(const std::string& cert_path) {
  std::ifstream in(cert_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read certificate '" + cert_path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  DenseCertificate cert = certificate_from_json(text);
  VerifyResult result = verify_certificate(cert);
  if (result.ok) {
    std::cout << "certificate OK: " << cert.bootstrap.size() << " bootstrap primes, "
              << cert.steps.size() << " steps, terminal gap "
              << to_decimal(cert.terminal_gap.get_num()) << "/"
              << to_decimal(cert.terminal_gap.get_den()) << "\n";
    return 0;
  }
  std::cout << "certificate INVALID at step " << result.failing_step << ": " << result.failure
            << "\n";
  return 1;
}

int run_mean(const std::string& checkpoints_s, const std::string& exact_threshold_s,
             const std::string& format, Sink& sink) {
  MeanOptions opt;
  opt.exact_ratio_threshold = parse_count(exact_threshold_s);
  auto cps = mean_checkpoints(parse_checkpoints(checkpoints_s), opt);
  if (format == "csv") {
    write_mean_csv(sink.stream(), cps);
  } else {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& cp : cps) {
      nlohmann::ordered_json row;
      row["x"] = cp.x;
      row["statistic"] = stat_name(cp.stat);
      if (cp.stat != MeanStat::ratio_s_s)
        row["partial_sum"] = to_decimal(cp.sum_int);
      else if (cp.mode == SumMode::exact_rational)
        row["partial_sum"] =
            to_decimal(cp.sum_rat.get_num()) + "/" + to_decimal(cp.sum_rat.get_den());
      else
        row["partial_sum"] = cp.sum_value;
      row["mode"] = cp.mode == SumMode::exact_rational ? "exact-rational" : "compensated-double";
      row["mean"] = cp.mean;
      row["limit"] = cp.limit_constant;
      row["normalized_error"] = cp.normalized_error;
      rows.push_back(std::move(row));
    }
    sink.stream() << rows.dump(2) << "\n";
  }
  return 0;
}

int run_moments(u32 k, u32 kmax, const std::string& limit_s, const std::string& primes_s,
                const std::string& nu_s, const std::string& format, Sink& sink) {
  u64 limit = parse_count(limit_s);
  if (kmax > 0) {
    GrowthTable table = moment_growth_check(kmax, limit);
    write_growth_csv(sink.stream(), table);
    return 0;
  }
  MomentOptions opt;
  opt.prime_bound = parse_count(primes_s);
  opt.nu_bound = static_cast<u32>(parse_count(nu_s));
  opt.empirical_x = limit;
  MomentReport report = moment_via_binomial(k, opt);
  if (format == "csv")
    write_moment_csv(sink.stream(), report);
  else
    sink.stream() << moment_report_to_json(report);
  return 0;
}

int run_series(bool wintner, const std::string& fn_name, double r_threshold, u32 k, u32 j,
               const std::string& limit_s, Sink& sink) {
  u64 bound = parse_count(limit_s);
  SeriesDiagnostic diag =
      wintner ? wintner_condition_check(k, j, bound)
              : erdos_wintner_diagnostic(additive_fn_from_name(fn_name), r_threshold, bound);
  write_series_csv(sink.stream(), diag);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aliquot: exact sieves, dense-value certificates, and distribution diagnostics\n"
      "for S_s(n), the divisor-sum of the sum-of-proper-divisors function"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "csv";
  int threads = 1;

  auto add_common = [&](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("--out", out_path, "write output to this file instead of stdout");
    if (with_format)
      cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", threads, "worker threads for table construction")
        ->check(CLI::PositiveNumber);
  };

  std::string limit = "1000", lo = "1";
  auto* sieve_cmd = app.add_subcommand(
      "sieve", "exact sigma/s/S_sigma/S_s/phi table; csv header n,sigma,s,S_sigma,S_s,phi");
  sieve_cmd->add_option("--limit", limit, "upper end of the range (accepts 1e7 notation)")
      ->required();
  sieve_cmd->add_option("--lo", lo, "lower end of the range");
  add_common(sieve_cmd);

  std::string grid = "0:3:0.01", cluster_eps, ks_limit;
  auto* edf_cmd = app.add_subcommand(
      "edf",
      "empirical distribution of S_s(n)/n; csv header x,F (grid mode),\n"
      "epsilon,max_window_density,argmax_center (--cluster-eps), n1,n2,distance (--ks-limit)");
  edf_cmd->add_option("--limit", limit, "sample bound N")->required();
  edf_cmd->add_option("--grid", grid, "evaluation grid lo:hi:step");
  edf_cmd->add_option("--cluster-eps", cluster_eps, "comma list of window half-widths");
  edf_cmd->add_option("--ks-limit", ks_limit, "second sample bound for the sup distance");
  add_common(edf_cmd, false);

  std::string target, eps;
  auto* dense_cmd = app.add_subcommand(
      "dense",
      "certificate driving S_s(N)/N to the target; JSON schema: target_*, epsilon_*,\n"
      "bootstrap_primes, steps[{B_num,B_den,q,r_num,r_den,gap_num,gap_den}], terminal_gap_*");
  dense_cmd->add_option("--target", target, "target value (rational: 1, 0.25, 4/3, 1e-3)")
      ->required();
  dense_cmd->add_option("--eps", eps, "tolerance (rational)")->required();
  std::string dense_format = "json";
  dense_cmd->add_option("--format", dense_format, "output format (certificates are JSON)")
      ->check(CLI::IsMember({"json"}));
  dense_cmd->add_option("--out", out_path, "write output to this file instead of stdout");

  std::string cert_path;
  auto* verify_cmd =
      app.add_subcommand("verify", "re-derive and check a dense certificate from scratch");
  verify_cmd->add_option("--cert", cert_path, "certificate JSON file")->required();

  std::string checkpoints = "decades:1e3:1e6", exact_threshold = "10000";
  auto* mean_cmd = app.add_subcommand(
      "mean", "running means against their limits; csv header\n"
              "x,statistic,partial_sum,mean,limit,normalized_error");
  mean_cmd->add_option("--checkpoints", checkpoints, "comma list or decades:<lo>:<hi>");
  mean_cmd->add_option("--exact-threshold", exact_threshold,
                       "exact-rational ratio accumulation up to this x");
  add_common(mean_cmd);

  u32 k = 1, kmax = 0, jj = 0;
  std::string euler_primes = "1e5", euler_nu = "60";
  auto* moments_cmd = app.add_subcommand(
      "moments",
      "moment of S_s(n)/n by Euler product vs empirical (JSON report), or --kmax growth\n"
      "table; csv header k,mu_k,log_ratio,carleman,mu_phi_2k,phi_bound_ok,stability");
  moments_cmd->add_option("--k", k, "moment order for the dual-route report");
  moments_cmd->add_option("--kmax", kmax, "growth-table mode up to this k");
  moments_cmd->add_option("--limit", limit, "empirical sample bound x")->required();
  moments_cmd->add_option("--euler-primes", euler_primes, "Euler product prime bound P");
  moments_cmd->add_option("--euler-nu", euler_nu, "Euler product exponent bound V");
  add_common(moments_cmd);

  bool wintner = false;
  std::string fn_name = "log-Ss-ratio";
  double r_threshold = 1.0;
  auto* series_cmd = app.add_subcommand(
      "series", "Erdos-Wintner three-series or Wintner-condition partial sums;\n"
                "csv header series,prime_bound,partial_sum,trend");
  series_cmd->add_option("--fn", fn_name,
                         "additive function: log-sigma-ratio, log-Ssigma-ratio,\n"
                         "log-Ssigma-over-sigma, log-Ss-ratio");
  series_cmd->add_option("--R", r_threshold, "Erdos-Wintner threshold R");
  series_cmd->add_flag("--wintner", wintner, "check Wintner conditions for h_{k,j} instead");
  series_cmd->add_option("--k", k, "k of h_{k,j} (with --wintner)");
  series_cmd->add_option("--j", jj, "j of h_{k,j} (with --wintner)");
  series_cmd->add_option("--limit", limit, "prime bound")->required();
  add_common(series_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Sink sink;
  sink.path = out_path;
  try {
    if (app.got_subcommand(sieve_cmd)) return run_sieve(limit, lo, format, threads, sink);
    if (app.got_subcommand(edf_cmd)) return run_edf(limit, grid, cluster_eps, ks_limit, sink);
    if (app.got_subcommand(dense_cmd)) return run_dense(target, eps, sink);
    if (app.got_subcommand(verify_cmd)) return run_verify(cert_path);
    if (app.got_subcommand(mean_cmd)) return run_mean(checkpoints, exact_threshold, format, sink);
    if (app.got_subcommand(moments_cmd))
      return run_moments(k, kmax, limit, euler_primes, euler_nu, format, sink);
    if (app.got_subcommand(series_cmd))
      return run_series(wintner, fn_name, r_threshold, k, jj, limit, sink);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
