#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "aliquot/numeric.hpp"

namespace aliquot {

// Exact values of the six arithmetic functions the toolkit is built around:
//   sigma(n)   sum of all divisors of n
//   s(n)       sum of proper divisors, s(n) = sigma(n) - n
//   S_sigma(n) sum of sigma(d) over divisors d of n  (Dirichlet convolution sigma * 1)
//   S_s(n)     sum of s(d) over divisors d of n,  S_s(n) = S_sigma(n) - sigma(n)
//   phi(n)     Euler totient

// Thrown when a table accumulation would wrap 64 bits; names the offending n.
struct OverflowError : std::runtime_error {
  u64 n;
  explicit OverflowError(u64 n_)
      : std::runtime_error("sieve accumulation overflows 64 bits at n = " + std::to_string(n_)),
        n(n_) {}
};

// An integer carried as its factorization plus the materialized value.
// Primes strictly increasing, all exponents >= 1; empty list <=> value 1.
struct FactoredInteger {
  struct Factor {
    Int prime;
    u32 exponent;
  };
  std::vector<Factor> factors;
  Int value{1};

  static FactoredInteger one() { return {}; }
  // Validates ordering/exponents and computes the value.
  static FactoredInteger from_factors(std::vector<Factor> factors);
  void validate() const;  // throws std::invalid_argument on a broken invariant
};

struct DivisorStats {
  FactoredInteger n;
  Int sigma;
  Int s_sigma;
  Int s_s;  // always s_sigma - sigma
};

struct SieveOptions {
  u64 segment_width = u64(1) << 22;
  int threads = 1;
};

// One sieved segment, [lo, hi] inclusive, arrays indexed n - lo.
// s(n) and S_s(n) derive by subtraction where needed.
struct SegmentView {
  u64 lo;
  u64 hi;
  std::span<const u64> sigma;
  std::span<const u64> s_sigma;
  std::span<const u64> phi;
};

// Streams exact sigma / S_sigma / phi over [lo, hi] in consecutive segments.
// Single-threaded, in order; consumers accumulate as they please.
void sieve_segments(u64 lo, u64 hi, const SieveOptions& opt,
                    const std::function<void(const SegmentView&)>& consume);

struct ArithmeticTable {
  u64 lo = 1;
  u64 hi = 0;
  std::vector<u64> sigma;
  std::vector<u64> s;
  std::vector<u64> s_sigma;
  std::vector<u64> s_s;
  std::vector<u64> phi;

  u64 size() const { return hi - lo + 1; }
  u64 index(u64 n) const;  // bounds-checked n - lo

  u64 sigma_at(u64 n) const { return sigma[index(n)]; }
  u64 s_at(u64 n) const { return s[index(n)]; }
  u64 s_sigma_at(u64 n) const { return s_sigma[index(n)]; }
  u64 s_s_at(u64 n) const { return s_s[index(n)]; }
  u64 phi_at(u64 n) const { return phi[index(n)]; }
};

// Exact table over [lo, hi]; construction may parallelize over segments
// (deterministic output). Throws OverflowError rather than wrapping.
ArithmeticTable sieve_range(u64 lo, u64 hi, const SieveOptions& opt = {});

// sigma(p^nu) = (p^(nu+1) - 1) / (p - 1), exact.
Int sigma_prime_power(const Int& p, u32 nu);

// S_sigma(p^nu) = sum_{i=0..nu} sigma(p^i), exact.
Int s_sigma_prime_power(const Int& p, u32 nu);

// Multiplicative evaluation from the factorization.
DivisorStats point_eval(const FactoredInteger& n);

// Stats for the product of two coprime integers. S_s comes from
//   S_s(ab) = S_s(a) S_s(b) + sigma(a) S_s(b) + sigma(b) S_s(a)
// and is cross-checked against S_sigma(ab) - sigma(ab); the two must agree.
DivisorStats combine_coprime(const DivisorStats& a, const DivisorStats& b);

// CSV rows "n,sigma,s,S_sigma,S_s,phi".
void write_csv(std::ostream& out, const ArithmeticTable& table);

}  // namespace aliquot
