#include "aliquot/numeric.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace aliquot {

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Int pow10_int(u64 e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string s = text;
  // strip surrounding whitespace
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.erase(s.begin());
  }
  if (s.empty()) throw std::invalid_argument("parse_rational: sign without digits");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("parse_rational: bad fraction '" + text + "'");
    Rat q = make_rat(Int(num, 10), Int(den, 10));
    return negative ? Rat(-q) : q;
  }

  // decimal with optional fractional part and exponent
  std::string digits;
  i64 exp10 = 0;
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      --exp10;
    }
  }
  if (digits.empty()) throw std::invalid_argument("parse_rational: no digits in '" + text + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::string etext = s.substr(i + 1);
    bool eneg = false;
    if (!etext.empty() && (etext.front() == '+' || etext.front() == '-')) {
      eneg = etext.front() == '-';
      etext.erase(etext.begin());
    }
    if (!all_digits(etext) || etext.size() > 6)
      throw std::invalid_argument("parse_rational: bad exponent in '" + text + "'");
    i64 e = std::stoll(etext);
    exp10 += eneg ? -e : e;
    i = s.size();
  }
  if (i != s.size()) throw std::invalid_argument("parse_rational: trailing junk in '" + text + "'");

  Int mantissa(digits, 10);
  Rat q;
  if (exp10 >= 0)
    q = make_rat(mantissa * pow10_int(static_cast<u64>(exp10)), Int(1));
  else
    q = make_rat(mantissa, pow10_int(static_cast<u64>(-exp10)));
  return negative ? Rat(-q) : q;
}

u64 parse_count(const std::string& text) {
  Rat q = parse_rational(text);
  if (q < 0) throw std::invalid_argument("parse_count: negative value '" + text + "'");
  if (q.get_den() != 1) throw std::invalid_argument("parse_count: not an integer '" + text + "'");
  Int n = q.get_num();
  if (!n.fits_ulong_p())
    throw std::invalid_argument("parse_count: value too large '" + text + "'");
  return mpz_get_ui(n.get_mpz_t());
}

std::string to_decimal(const Int& v) { return v.get_str(10); }

Int int_from_decimal(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.erase(s.begin());
  }
  if (!all_digits(s)) throw std::invalid_argument("int_from_decimal: bad integer '" + text + "'");
  Int v(s, 10);
  return negative ? Int(-v) : v;
}

Int rat_floor(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

double log10_int(const Int& v) {
  if (v <= 0) throw std::invalid_argument("log10_int: nonpositive argument");
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log10(mant) + static_cast<double>(exp2) * std::log10(2.0);
}

u64 isqrt_u64(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

}  // namespace aliquot
