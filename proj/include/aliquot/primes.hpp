#pragma once

#include <vector>

#include "aliquot/numeric.hpp"

namespace aliquot {

// Eratosthenes flags, flags[n] != 0 iff n is prime, n <= limit.
std::vector<std::uint8_t> prime_flags(u64 limit);

// All primes <= limit, increasing.
std::vector<u32> primes_up_to(u32 limit);

// Miller-Rabin primality. Below deterministic_bound() (3.317e24) the witness
// set {2,3,5,7,...,41} (first 13 primes) is known to have no strong
// pseudoprime, so answers there are exact. At or above the bound the engine
// adds `rounds` extra bases derived deterministically from the candidate,
// with error probability < 4^-rounds.
class PrimalityEngine {
 public:
  explicit PrimalityEngine(int rounds = 64);

  bool is_prime(u64 n) const;
  bool is_prime(const Int& n) const;

  // Smallest prime strictly greater than `lower`.
  Int next_prime_above(const Int& lower) const;
  u64 next_prime_above_u64(u64 lower) const;

  // True when is_prime(n) is in the exact regime.
  static bool deterministic_for(const Int& n);
  static const Int& deterministic_bound();

  int rounds() const { return rounds_; }

 private:
  int rounds_;
};

}  // namespace aliquot
