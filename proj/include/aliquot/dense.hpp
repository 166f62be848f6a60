#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aliquot/numeric.hpp"
#include "aliquot/primes.hpp"

namespace aliquot {

// Constructive density algorithm for the values S_s(N)/N.
//
// Every N built here is squarefree, carried only through the exact rationals
//   r = S_s(N)/N,  t = S_sigma(N)/N
// and its prime support; N itself is never materialized. Appending a prime q
// not dividing N updates the pair exactly:
//   r' = r + (t + r)/q        (S_sigma(q) = q + 2, S_s(q) = 1)
//   t' = t (q + 2)/q
// Given a target x > r, a prime q chosen in (B, 2B) with
//   B = (t + r)/(x - r)
// lands r' strictly inside ((x + r)/2, x), so the gap to x at least halves per
// step. The bootstrap multiplies consecutive primes p_k, p_{k+1}, ... (p_k the
// least prime with 1/p_k < x) until one more prime would reach or pass x;
// divergence of prod (p+2)/p guarantees this terminates.

struct RatioState {
  Rat r{0};             // S_s(N)/N
  Rat t{1};             // S_sigma(N)/N
  std::vector<Int> support;  // primes dividing N, strictly increasing
  double log10_n = 0.0;      // diagnostic only, never gates anything

  bool in_support(const Int& q) const;
};

// State for N * q; q must be prime and absent from the support.
RatioState ratio_extend(const RatioState& state, const Int& q);

// Claim-1 bound B(N) = (t + r)/(x - r); requires r < x.
Rat compute_B(const RatioState& state, const Rat& x);

struct DenseStep {
  Rat bound_b;    // B before the step
  Int q;          // prime chosen, B < q < 2B
  Rat r_after;
  Rat gap_after;  // x - r_after
};

struct DenseCertificate {
  Rat target;
  Rat epsilon;
  std::vector<Int> bootstrap;  // consecutive primes p_k..p_m
  std::vector<DenseStep> steps;
  Rat terminal_gap;
  bool probabilistic_primality = false;  // any q beyond the deterministic bound
  int primality_rounds = 0;              // rounds used in that regime
};

// State of P_m = p_k ... p_m, the largest consecutive-prime product with
// S_s(P_m)/P_m < x; requires x > 0.
RatioState bootstrap(const Rat& x, const PrimalityEngine& engine = PrimalityEngine());

// Certificate with terminal gap <= epsilon for a target x > 0. Chooses the
// smallest prime above B at every step (reproducible certificates). An exact
// hit during bootstrap yields a zero-gap certificate with no steps.
DenseCertificate approximate(const Rat& x, const Rat& epsilon,
                             const PrimalityEngine& engine = PrimalityEngine());

// Target 0: the single prime p > 1/epsilon, r = 1/p.
DenseCertificate approximate_zero(const Rat& epsilon,
                                  const PrimalityEngine& engine = PrimalityEngine());

struct VerifyResult {
  bool ok = true;
  int failing_step = -2;  // -1 bootstrap/terminal checks, >= 0 step index
  std::string failure;    // empty when ok

  explicit operator bool() const { return ok; }
};

// Re-derives every ratio from scratch via point_eval on the factored N_i,
// re-checks primality of every prime, membership q in (B, 2B), strict gap
// halving, and the terminal gap. Reports the first failure.
VerifyResult verify_certificate(const DenseCertificate& cert,
                                const PrimalityEngine& engine = PrimalityEngine());

// JSON round trip; all integers as decimal strings.
std::string certificate_to_json(const DenseCertificate& cert);
DenseCertificate certificate_from_json(const std::string& text);

}  // namespace aliquot
