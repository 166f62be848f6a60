#include "aliquot/primes.hpp"

#include <stdexcept>

namespace aliquot {

std::vector<std::uint8_t> prime_flags(u64 limit) {
  std::vector<std::uint8_t> flags(limit + 1, 1);
  flags[0] = 0;
  if (limit >= 1) flags[1] = 0;
  for (u64 p = 2; p * p <= limit; ++p) {
    if (!flags[p]) continue;
    for (u64 m = p * p; m <= limit; m += p) flags[m] = 0;
  }
  return flags;
}

std::vector<u32> primes_up_to(u32 limit) {
  auto flags = prime_flags(limit);
  std::vector<u32> out;
  for (u32 n = 2; n <= limit; ++n)
    if (flags[n]) out.push_back(n);
  return out;
}

namespace {

// First 13 primes: no strong pseudoprime below 3.317e24 (Sorenson-Webster).
constexpr u64 kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

u64 mulmod_u64(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod_u64(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

// One strong-probable-prime round; n odd, n > 2, n - 1 = d * 2^s.
bool sprp_u64(u64 n, u64 d, int s, u64 base) {
  base %= n;
  if (base == 0) return true;
  u64 x = powmod_u64(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool sprp_mpz(const Int& n, const Int& d, unsigned long s, const Int& base) {
  Int b = base % n;
  if (b == 0) return true;
  Int x;
  mpz_powm(x.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  Int n1 = n - 1;
  if (x == 1 || x == n1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n1) return true;
  }
  return false;
}

u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

PrimalityEngine::PrimalityEngine(int rounds) : rounds_(rounds) {
  if (rounds < 1) throw std::invalid_argument("PrimalityEngine: rounds must be >= 1");
}

const Int& PrimalityEngine::deterministic_bound() {
  static const Int bound("3317044064679887385961981", 10);
  return bound;
}

bool PrimalityEngine::deterministic_for(const Int& n) { return n < deterministic_bound(); }

bool PrimalityEngine::is_prime(u64 n) const {
  if (n < 2) return false;
  for (u64 p : kWitnesses) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 base : kWitnesses)
    if (!sprp_u64(n, d, s, base)) return false;
  return true;
}

bool PrimalityEngine::is_prime(const Int& n) const {
  if (n.fits_ulong_p()) return is_prime(static_cast<u64>(mpz_get_ui(n.get_mpz_t())));
  // n > 2^64 here, odd check and small-prime trial division first
  for (u64 p : kWitnesses)
    if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) return false;
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (u64 base : kWitnesses)
    if (!sprp_mpz(n, d, s, Int(base))) return false;
  if (!deterministic_for(n)) {
    // extra bases derived from n itself, deterministic per candidate
    u64 seed = mpz_get_ui(n.get_mpz_t()) ^ static_cast<u64>(mpz_sizeinbase(n.get_mpz_t(), 2));
    for (int i = 0; i < rounds_; ++i) {
      seed = splitmix64(seed);
      Int base = Int(static_cast<unsigned long>(seed % 0xffffffffffffu + 43));
      if (!sprp_mpz(n, d, s, base)) return false;
    }
  }
  return true;
}

Int PrimalityEngine::next_prime_above(const Int& lower) const {
  if (lower < 2) return Int(2);
  Int c = lower + 1;
  if (c == 2) return c;
  if (mpz_even_p(c.get_mpz_t())) ++c;
  while (!is_prime(c)) c += 2;
  return c;
}

u64 PrimalityEngine::next_prime_above_u64(u64 lower) const {
  if (lower < 2) return 2;
  u64 c = lower + 1;
  if (c % 2 == 0) ++c;
  while (!is_prime(c)) c += 2;
  return c;
}

}  // namespace aliquot
