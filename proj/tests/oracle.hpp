#pragma once

// Test-only oracles, kept independent of the library's sieve and closed-form
// paths: definitional divisor enumeration, per-n trial-division factorization,
// and a naive full-array convolution sieve.

#include <cstdint>
#include <vector>

#include "aliquot/arith.hpp"
#include "aliquot/numeric.hpp"

namespace oracle {

using aliquot::u32;
using aliquot::u64;

inline u64 sigma_naive(u64 n) {
  u64 s = 0;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    s += d;
    if (d != n / d) s += n / d;
  }
  return s;
}

inline u64 s_naive(u64 n) {
  // sum of proper divisors, straight from the definition
  u64 s = 0;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    if (d < n) s += d;
    u64 q = n / d;
    if (q != d && q < n) s += q;
  }
  return s;
}

template <typename Fn>
inline u64 divisor_sum(u64 n, Fn f) {
  u64 s = 0;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    s += f(d);
    if (d != n / d) s += f(n / d);
  }
  return s;
}

inline u64 s_sigma_naive(u64 n) {
  return divisor_sum(n, [](u64 d) { return sigma_naive(d); });
}

inline u64 s_s_naive(u64 n) {
  return divisor_sum(n, [](u64 d) { return s_naive(d); });
}

inline std::vector<std::pair<u64, u32>> factorize(u64 n) {
  std::vector<std::pair<u64, u32>> f;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    u32 e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline u64 phi_naive(u64 n) {
  u64 phi = 1;
  for (auto [p, e] : factorize(n)) {
    u64 pe = 1;
    for (u32 i = 1; i < e; ++i) pe *= p;
    phi *= pe * (p - 1);
  }
  return phi;
}

inline aliquot::FactoredInteger factored(u64 n) {
  std::vector<aliquot::FactoredInteger::Factor> factors;
  for (auto [p, e] : factorize(n)) factors.push_back({aliquot::Int(p), e});
  return aliquot::FactoredInteger::from_factors(std::move(factors));
}

// Full-array harmonic double pass; O(N log N) time, 3 arrays of memory.
struct SimpleSieve {
  std::vector<u64> sigma, s_sigma;
  explicit SimpleSieve(u64 n) : sigma(n + 1, 0), s_sigma(n + 1, 0) {
    for (u64 d = 1; d <= n; ++d)
      for (u64 m = d; m <= n; m += d) sigma[m] += d;
    for (u64 d = 1; d <= n; ++d)
      for (u64 m = d; m <= n; m += d) s_sigma[m] += sigma[d];
  }
  u64 s_s(u64 n) const { return s_sigma[n] - sigma[n]; }
};

// splitmix64: deterministic generator for property-style tests
struct Rng {
  u64 state;
  explicit Rng(u64 seed) : state(seed) {}
  u64 next() {
    u64 x = (state += 0x9e3779b97f4a7c15ull);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }
  u64 below(u64 bound) { return next() % bound; }
};

}  // namespace oracle
