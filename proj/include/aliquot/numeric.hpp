#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace aliquot {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Arbitrary-precision integer / exact rational. Rat values produced by the
// helpers below (and by gmp arithmetic on canonical inputs) are always in
// lowest terms with a positive denominator.
using Int = mpz_class;
using Rat = mpq_class;

// num/den reduced to canonical form; den must be nonzero.
Rat make_rat(const Int& num, const Int& den);

inline Rat make_rat(i64 num, i64 den) { return make_rat(Int(num), Int(den)); }

// Accepts "123", "-4/7", "0.25", "1e-6", "2.5e3". Throws std::invalid_argument.
Rat parse_rational(const std::string& text);

// Nonnegative integer count, scientific notation allowed ("1e7" == 10000000).
// Rejects anything fractional, negative, or beyond 64 bits.
u64 parse_count(const std::string& text);

std::string to_decimal(const Int& v);
Int int_from_decimal(const std::string& text);

// floor(q) as an integer (round toward -infinity).
Int rat_floor(const Rat& q);

// log10 of a positive integer, as a double diagnostic (exact to ~1 ulp).
double log10_int(const Int& v);

u64 isqrt_u64(u64 n);

}  // namespace aliquot
