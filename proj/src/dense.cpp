#include "aliquot/dense.hpp"

#include <json.hpp>

#include <algorithm>

#include "aliquot/arith.hpp"

namespace aliquot {

bool RatioState::in_support(const Int& q) const {
  return std::binary_search(support.begin(), support.end(), q);
}

RatioState ratio_extend(const RatioState& state, const Int& q) {
  if (q < 2) throw std::invalid_argument("ratio_extend: q < 2");
  if (state.in_support(q)) throw std::invalid_argument("ratio_extend: q already divides N");
  RatioState next;
  Rat qr = make_rat(q, Int(1));
  next.r = state.r + (state.t + state.r) / qr;
  next.t = state.t * make_rat(q + 2, q);
  next.support = state.support;
  next.support.insert(std::upper_bound(next.support.begin(), next.support.end(), q), q);
  next.log10_n = state.log10_n + log10_int(q);
  return next;
}

Rat compute_B(const RatioState& state, const Rat& x) {
  if (!(state.r < x)) throw std::invalid_argument("compute_B: requires S_s(N)/N < x");
  return (state.t + state.r) / (x - state.r);
}

namespace {

// Least prime p with 1/p < x, i.e. the least prime strictly above 1/x.
Int least_prime_below_reciprocal(const Rat& x, const PrimalityEngine& engine) {
  Rat inv = Rat(1) / x;
  return engine.next_prime_above(rat_floor(inv));
}

struct BootstrapOutcome {
  RatioState pm;       // state of P_m, r < x
  Int next_prime;      // p_{m+1}
  Rat next_r;          // S_s(P_m p_{m+1}) / (P_m p_{m+1}), >= x
};

BootstrapOutcome bootstrap_full(const Rat& x, const PrimalityEngine& engine) {
  if (!(x > 0)) throw std::invalid_argument("bootstrap: requires x > 0");
  Int p = least_prime_below_reciprocal(x, engine);
  RatioState state = ratio_extend(RatioState{}, p);
  for (;;) {
    Int q = engine.next_prime_above(state.support.back());
    RatioState next = ratio_extend(state, q);
    if (next.r < x) {
      state = std::move(next);
      continue;
    }
    return BootstrapOutcome{std::move(state), std::move(q), next.r};
  }
}

void flag_primality(DenseCertificate& cert, const Int& q, const PrimalityEngine& engine) {
  if (!PrimalityEngine::deterministic_for(q)) {
    cert.probabilistic_primality = true;
    cert.primality_rounds = engine.rounds();
  }
}

}  // namespace

RatioState bootstrap(const Rat& x, const PrimalityEngine& engine) {
  BootstrapOutcome out = bootstrap_full(x, engine);
  // Claim-1 hypotheses hold for P_m: B(P_m) >= p_{m+1} > every prime factor.
  if (!(compute_B(out.pm, x) >= make_rat(out.next_prime, Int(1))))
    throw std::logic_error("bootstrap: B(P_m) < p_{m+1}");
  return out.pm;
}

DenseCertificate approximate(const Rat& x, const Rat& epsilon, const PrimalityEngine& engine) {
  if (!(x > 0)) throw std::invalid_argument("approximate: requires x > 0 (use approximate_zero)");
  if (!(epsilon > 0)) throw std::invalid_argument("approximate: requires epsilon > 0");

  DenseCertificate cert;
  cert.target = x;
  cert.epsilon = epsilon;

  BootstrapOutcome boot = bootstrap_full(x, engine);
  cert.bootstrap = boot.pm.support;
  if (boot.next_r == x) {
    // exact hit on P_{m+1}: zero-gap certificate, no stepping phase
    cert.bootstrap.push_back(boot.next_prime);
    cert.terminal_gap = 0;
    for (const Int& p : cert.bootstrap) flag_primality(cert, p, engine);
    return cert;
  }

  RatioState state = boot.pm;
  Rat gap = x - state.r;
  while (gap > epsilon) {
    Rat bound = compute_B(state, x);
    Int q = engine.next_prime_above(rat_floor(bound));
    if (!(make_rat(q, Int(1)) < 2 * bound))
      throw std::logic_error("approximate: no prime found in (B, 2B)");
    Rat prev_r = state.r;
    state = ratio_extend(state, q);
    gap = x - state.r;
    // Claim 1: (x + r)/2 < r' < x, equivalently 0 < gap' < gap/2
    if (!(gap > 0) || !(state.r > (x + prev_r) / 2))
      throw std::logic_error("approximate: step left the Claim-1 window");
    cert.steps.push_back(DenseStep{bound, q, state.r, gap});
  }
  cert.terminal_gap = gap;
  for (const Int& p : cert.bootstrap) flag_primality(cert, p, engine);
  for (const auto& st : cert.steps) flag_primality(cert, st.q, engine);
  return cert;
}

DenseCertificate approximate_zero(const Rat& epsilon, const PrimalityEngine& engine) {
  if (!(epsilon > 0)) throw std::invalid_argument("approximate_zero: requires epsilon > 0");
  Int p = least_prime_below_reciprocal(epsilon, engine);
  DenseCertificate cert;
  cert.target = 0;
  cert.epsilon = epsilon;
  cert.bootstrap = {p};
  cert.terminal_gap = make_rat(Int(1), p);
  flag_primality(cert, p, engine);
  return cert;
}

namespace {

VerifyResult fail(int step, std::string message) {
  return VerifyResult{false, step, std::move(message)};
}

// Exact r and t from the factorization, through the multiplicative closed
// forms (independent of the incremental product-formula route).
void derive_ratios(const std::vector<Int>& primes, Rat& r, Rat& t) {
  std::vector<FactoredInteger::Factor> factors;
  factors.reserve(primes.size());
  for (const Int& p : primes) factors.push_back({p, 1});
  DivisorStats st = point_eval(FactoredInteger::from_factors(factors));
  r = make_rat(st.s_s, st.n.value);
  t = make_rat(st.s_sigma, st.n.value);
}

}  // namespace

VerifyResult verify_certificate(const DenseCertificate& cert, const PrimalityEngine& engine) {
  const Rat& x = cert.target;
  if (x < 0) return fail(-1, "target negative");
  if (!(cert.epsilon > 0)) return fail(-1, "epsilon not positive");
  if (cert.bootstrap.empty()) return fail(-1, "empty bootstrap");

  for (std::size_t i = 0; i < cert.bootstrap.size(); ++i) {
    if (!engine.is_prime(cert.bootstrap[i]))
      return fail(-1, "bootstrap prime " + to_decimal(cert.bootstrap[i]) + " not prime");
    if (i > 0 && engine.next_prime_above(cert.bootstrap[i - 1]) != cert.bootstrap[i])
      return fail(-1, "bootstrap primes not consecutive");
  }

  if (x == 0) {
    // single-prime certificate: r = 1/p < epsilon
    if (cert.bootstrap.size() != 1 || !cert.steps.empty())
      return fail(-1, "zero-target certificate must be a single prime with no steps");
    Rat r = make_rat(Int(1), cert.bootstrap[0]);
    if (cert.terminal_gap != r) return fail(-1, "terminal gap != 1/p");
    if (!(cert.terminal_gap <= cert.epsilon)) return fail(-1, "terminal gap exceeds epsilon");
    return {};
  }

  // p_k minimality: least prime with 1/p < x
  {
    Int expected = least_prime_below_reciprocal(x, engine);
    if (cert.bootstrap[0] != expected)
      return fail(-1, "first bootstrap prime is not the least prime with 1/p < x");
  }

  Rat r, t;
  std::vector<Int> support = cert.bootstrap;
  derive_ratios(support, r, t);

  if (cert.steps.empty() && cert.terminal_gap == 0) {
    if (r != x) return fail(-1, "zero-gap certificate does not hit the target");
    return {};
  }
  if (!(r < x)) return fail(-1, "bootstrap ratio not below target");

  // Claim-2 maximality: one more consecutive prime reaches or passes x
  {
    std::vector<Int> extended = support;
    extended.push_back(engine.next_prime_above(support.back()));
    Rat r1, t1;
    derive_ratios(extended, r1, t1);
    if (r1 < x) return fail(-1, "bootstrap stopped early: next prime keeps ratio below target");
  }

  Rat gap = x - r;
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const DenseStep& step = cert.steps[i];
    int si = static_cast<int>(i);
    Rat bound = (t + r) / (x - r);
    if (step.bound_b != bound) return fail(si, "recorded B mismatch");
    if (!engine.is_prime(step.q)) return fail(si, "q not prime");
    Rat q = make_rat(step.q, Int(1));
    if (!(bound < q && q < 2 * bound)) return fail(si, "q outside (B, 2B)");
    if (std::binary_search(support.begin(), support.end(), step.q))
      return fail(si, "q already divides N");

    support.insert(std::upper_bound(support.begin(), support.end(), step.q), step.q);
    derive_ratios(support, r, t);
    if (r != step.r_after) return fail(si, "ratio mismatch");
    Rat g = x - r;
    if (step.gap_after != g) return fail(si, "recorded gap mismatch");
    if (!(g > 0)) return fail(si, "gap not positive");
    if (!(g < gap / 2)) return fail(si, "gap not halved");
    gap = g;
  }

  if (cert.terminal_gap != gap) return fail(-1, "terminal gap mismatch");
  if (!(cert.terminal_gap <= cert.epsilon)) return fail(-1, "terminal gap exceeds epsilon");
  return {};
}

// --- JSON serialization ------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

std::string num_str(const Rat& q) { return to_decimal(q.get_num()); }
std::string den_str(const Rat& q) { return to_decimal(q.get_den()); }

Rat rat_from_fields(const ordered_json& j, const std::string& prefix) {
  Int num = int_from_decimal(j.at(prefix + "_num").get<std::string>());
  Int den = int_from_decimal(j.at(prefix + "_den").get<std::string>());
  return make_rat(num, den);
}

}  // namespace

std::string certificate_to_json(const DenseCertificate& cert) {
  ordered_json j;
  j["target_num"] = num_str(cert.target);
  j["target_den"] = den_str(cert.target);
  j["epsilon_num"] = num_str(cert.epsilon);
  j["epsilon_den"] = den_str(cert.epsilon);
  j["bootstrap_primes"] = ordered_json::array();
  for (const Int& p : cert.bootstrap) j["bootstrap_primes"].push_back(to_decimal(p));
  j["steps"] = ordered_json::array();
  for (const auto& step : cert.steps) {
    ordered_json s;
    s["B_num"] = num_str(step.bound_b);
    s["B_den"] = den_str(step.bound_b);
    s["q"] = to_decimal(step.q);
    s["r_num"] = num_str(step.r_after);
    s["r_den"] = den_str(step.r_after);
    s["gap_num"] = num_str(step.gap_after);
    s["gap_den"] = den_str(step.gap_after);
    j["steps"].push_back(std::move(s));
  }
  j["terminal_gap_num"] = num_str(cert.terminal_gap);
  j["terminal_gap_den"] = den_str(cert.terminal_gap);
  j["primality"] = cert.probabilistic_primality
                       ? "probabilistic-" + std::to_string(cert.primality_rounds)
                       : "deterministic";
  return j.dump(2) + "\n";
}

DenseCertificate certificate_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("certificate: bad JSON: ") + e.what());
  }
  try {
    DenseCertificate cert;
    cert.target = rat_from_fields(j, "target");
    cert.epsilon = rat_from_fields(j, "epsilon");
    for (const auto& p : j.at("bootstrap_primes"))
      cert.bootstrap.push_back(int_from_decimal(p.get<std::string>()));
    for (const auto& s : j.at("steps")) {
      DenseStep step;
      step.bound_b = rat_from_fields(s, "B");
      step.q = int_from_decimal(s.at("q").get<std::string>());
      step.r_after = rat_from_fields(s, "r");
      step.gap_after = rat_from_fields(s, "gap");
      cert.steps.push_back(std::move(step));
    }
    cert.terminal_gap = rat_from_fields(j, "terminal_gap");
    if (j.contains("primality")) {
      std::string mode = j["primality"].get<std::string>();
      if (mode.rfind("probabilistic-", 0) == 0) {
        cert.probabilistic_primality = true;
        cert.primality_rounds = std::stoi(mode.substr(14));
      }
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("certificate: missing field: ") + e.what());
  }
}

}  // namespace aliquot
