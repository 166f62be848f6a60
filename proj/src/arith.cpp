#include "aliquot/arith.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <thread>

#include "aliquot/primes.hpp"

namespace aliquot {

namespace {

inline void add_checked(u64& acc, u64 v, u64 n) {
  if (__builtin_add_overflow(acc, v, &acc)) throw OverflowError(n);
}

// Exact sigma over [lo, hi] by divisor-pair enumeration: every divisor pair
// (d, m/d) of m has d <= sqrt(m), so a single d-loop up to sqrt(hi) covers the
// segment with no data from outside it.
void sigma_into(u64 lo, u64 hi, std::span<u64> out) {
  std::fill(out.begin(), out.end(), 0);
  for (u64 d = 1; d * d <= hi; ++d) {
    u64 q = std::max(d, (lo + d - 1) / d);
    for (u64 m = d * q; m <= hi; m += d, ++q) {
      u64& acc = out[m - lo];
      add_checked(acc, d, m);
      if (q != d) add_checked(acc, q, m);
    }
  }
}

// Exact S_sigma(m) = sum_{d|m} sigma(d) over [lo, hi]. Divisors d <= R come
// from a harmonic pass over the precomputed sigma_small = sigma(1..R); for
// d > R the cofactor q = m/d is <= hi/(R+1), and sigma on the needed interval
// [lo/q, hi/q] is recomputed on the fly (q = 1 reuses this segment's sigma).
void s_sigma_into(u64 lo, u64 hi, std::span<const u64> sigma_seg,
                  std::span<const u64> sigma_small, std::span<u64> out,
                  std::vector<u64>& scratch) {
  std::fill(out.begin(), out.end(), 0);
  const u64 r = isqrt_u64(hi);

  for (u64 d = 1; d <= r; ++d) {
    u64 m0 = ((lo + d - 1) / d) * d;
    for (u64 m = m0; m <= hi; m += d) add_checked(out[m - lo], sigma_small[d - 1], m);
  }

  for (u64 q = 1; q * (r + 1) <= hi; ++q) {
    u64 dlo = std::max(r + 1, (lo + q - 1) / q);
    u64 dhi = hi / q;
    if (dlo > dhi) continue;
    std::span<const u64> sig;
    if (q == 1) {
      sig = sigma_seg.subspan(dlo - lo);
    } else {
      scratch.resize(dhi - dlo + 1);
      sigma_into(dlo, dhi, scratch);
      sig = scratch;
    }
    for (u64 d = dlo; d <= dhi; ++d) add_checked(out[q * d - lo], sig[d - dlo], q * d);
  }
}

// Exact phi over [lo, hi]: strip every prime p <= sqrt(hi) from the residual,
// multiplying in p^(e-1)(p-1); a residual > 1 afterwards is a single prime.
void phi_into(u64 lo, u64 hi, const std::vector<u32>& primes, std::span<u64> out,
              std::vector<u64>& rem) {
  const u64 width = hi - lo + 1;
  rem.resize(width);
  for (u64 i = 0; i < width; ++i) {
    rem[i] = lo + i;
    out[i] = 1;
  }
  for (u32 p : primes) {
    u64 pp = p;
    if (pp * pp > hi) break;
    u64 m0 = ((lo + pp - 1) / pp) * pp;
    for (u64 m = m0; m <= hi; m += pp) {
      u64 i = m - lo;
      u64 factor = p - 1;
      rem[i] /= pp;
      while (rem[i] % pp == 0) {
        rem[i] /= pp;
        factor *= pp;
      }
      out[i] *= factor;
    }
  }
  for (u64 i = 0; i < width; ++i)
    if (rem[i] > 1) out[i] *= rem[i] - 1;
  // n = 1: residual 1, phi stays 1
}

struct SharedSieveData {
  std::vector<u64> sigma_small;  // sigma(1..sqrt(hi))
  std::vector<u32> primes;       // primes <= sqrt(hi)
};

SharedSieveData make_shared_data(u64 hi) {
  SharedSieveData d;
  u64 r = isqrt_u64(hi);
  d.sigma_small.resize(r);
  sigma_into(1, r, d.sigma_small);
  d.primes = primes_up_to(static_cast<u32>(r));
  return d;
}

void check_range(u64 lo, u64 hi) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("sieve: need 1 <= lo <= hi");
}

}  // namespace

void sieve_segments(u64 lo, u64 hi, const SieveOptions& opt,
                    const std::function<void(const SegmentView&)>& consume) {
  check_range(lo, hi);
  if (opt.segment_width == 0) throw std::invalid_argument("sieve: zero segment width");
  SharedSieveData shared = make_shared_data(hi);

  std::vector<u64> sigma, s_sigma, phi, scratch, rem;
  for (u64 seg_lo = lo; seg_lo <= hi;) {
    u64 seg_hi = std::min(hi, seg_lo + opt.segment_width - 1);
    u64 width = seg_hi - seg_lo + 1;
    sigma.resize(width);
    s_sigma.resize(width);
    phi.resize(width);

    sigma_into(seg_lo, seg_hi, sigma);
    s_sigma_into(seg_lo, seg_hi, sigma, shared.sigma_small, s_sigma, scratch);
    phi_into(seg_lo, seg_hi, shared.primes, phi, rem);

    consume(SegmentView{seg_lo, seg_hi, sigma, s_sigma, phi});
    if (seg_hi == hi) break;
    seg_lo = seg_hi + 1;
  }
}

u64 ArithmeticTable::index(u64 n) const {
  if (n < lo || n > hi) throw std::out_of_range("ArithmeticTable: n outside [lo, hi]");
  return n - lo;
}

ArithmeticTable sieve_range(u64 lo, u64 hi, const SieveOptions& opt) {
  check_range(lo, hi);
  if (opt.segment_width == 0) throw std::invalid_argument("sieve: zero segment width");
  if (opt.threads < 1) throw std::invalid_argument("sieve: threads must be >= 1");

  ArithmeticTable t;
  t.lo = lo;
  t.hi = hi;
  u64 width = hi - lo + 1;
  t.sigma.resize(width);
  t.s.resize(width);
  t.s_sigma.resize(width);
  t.s_s.resize(width);
  t.phi.resize(width);

  SharedSieveData shared = make_shared_data(hi);

  // Segments are independent given the shared small tables, so construction
  // parallelizes over disjoint slices; output is identical for any thread count.
  std::vector<std::pair<u64, u64>> segments;
  for (u64 seg_lo = lo; seg_lo <= hi;) {
    u64 seg_hi = std::min(hi, seg_lo + opt.segment_width - 1);
    segments.emplace_back(seg_lo, seg_hi);
    if (seg_hi == hi) break;
    seg_lo = seg_hi + 1;
  }

  std::vector<std::exception_ptr> errors(segments.size());
  auto run_segment = [&](std::size_t si) {
    try {
      auto [seg_lo, seg_hi] = segments[si];
      u64 off = seg_lo - lo;
      u64 w = seg_hi - seg_lo + 1;
      std::vector<u64> scratch, rem;
      sigma_into(seg_lo, seg_hi, std::span<u64>(t.sigma).subspan(off, w));
      s_sigma_into(seg_lo, seg_hi, std::span<const u64>(t.sigma).subspan(off, w),
                   shared.sigma_small, std::span<u64>(t.s_sigma).subspan(off, w), scratch);
      phi_into(seg_lo, seg_hi, shared.primes, std::span<u64>(t.phi).subspan(off, w), rem);
      for (u64 i = 0; i < w; ++i) {
        u64 n = seg_lo + i;
        t.s[off + i] = t.sigma[off + i] - n;                       // sigma(n) >= n
        t.s_s[off + i] = t.s_sigma[off + i] - t.sigma[off + i];    // S_sigma(n) >= sigma(n)
      }
    } catch (...) {
      errors[si] = std::current_exception();
    }
  };

  int threads = std::min<int>(opt.threads, static_cast<int>(segments.size()));
  if (threads <= 1) {
    for (std::size_t si = 0; si < segments.size(); ++si) run_segment(si);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int ti = 0; ti < threads; ++ti)
      pool.emplace_back([&] {
        for (std::size_t si = next.fetch_add(1); si < segments.size(); si = next.fetch_add(1))
          run_segment(si);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);  // lowest segment first
  return t;
}

FactoredInteger FactoredInteger::from_factors(std::vector<Factor> factors) {
  FactoredInteger f;
  f.factors = std::move(factors);
  f.value = 1;
  for (const auto& [p, e] : f.factors) {
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    f.value *= pe;
  }
  f.validate();
  return f;
}

void FactoredInteger::validate() const {
  Int product(1);
  const Int* prev = nullptr;
  for (const auto& [p, e] : factors) {
    if (p < 2) throw std::invalid_argument("FactoredInteger: prime < 2");
    if (e < 1) throw std::invalid_argument("FactoredInteger: exponent < 1");
    if (prev && !(*prev < p))
      throw std::invalid_argument("FactoredInteger: primes not strictly increasing");
    prev = &p;
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    product *= pe;
  }
  if (product != value) throw std::invalid_argument("FactoredInteger: value != product of factors");
}

Int sigma_prime_power(const Int& p, u32 nu) {
  if (p < 2) throw std::invalid_argument("sigma_prime_power: p < 2");
  Int pk;
  mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), nu + 1);
  Int num = pk - 1;
  Int den = p - 1;
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (r != 0) throw std::logic_error("sigma_prime_power: geometric sum not integral");
  return q;
}

Int s_sigma_prime_power(const Int& p, u32 nu) {
  if (p < 2) throw std::invalid_argument("s_sigma_prime_power: p < 2");
  // sum_{i<=nu} (p^(i+1)-1)/(p-1) = (p^(nu+2) - p - (nu+1)(p-1)) / (p-1)^2
  Int pk;
  mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), nu + 2);
  Int num = pk - p - Int(nu + 1) * (p - 1);
  Int den = (p - 1) * (p - 1);
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (r != 0) throw std::logic_error("s_sigma_prime_power: closed form not integral");
  return q;
}

DivisorStats point_eval(const FactoredInteger& n) {
  n.validate();
  DivisorStats st;
  st.n = n;
  st.sigma = 1;
  st.s_sigma = 1;
  for (const auto& [p, e] : n.factors) {
    st.sigma *= sigma_prime_power(p, e);
    st.s_sigma *= s_sigma_prime_power(p, e);
  }
  st.s_s = st.s_sigma - st.sigma;
  return st;
}

DivisorStats combine_coprime(const DivisorStats& a, const DivisorStats& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.n.value.get_mpz_t(), b.n.value.get_mpz_t());
  if (g != 1) throw std::invalid_argument("combine_coprime: inputs share a factor");

  // merge factor lists; coprimality makes this a strict interleave
  std::vector<FactoredInteger::Factor> merged;
  merged.reserve(a.n.factors.size() + b.n.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.n.factors.size() && j < b.n.factors.size()) {
    if (a.n.factors[i].prime < b.n.factors[j].prime)
      merged.push_back(a.n.factors[i++]);
    else
      merged.push_back(b.n.factors[j++]);
  }
  while (i < a.n.factors.size()) merged.push_back(a.n.factors[i++]);
  while (j < b.n.factors.size()) merged.push_back(b.n.factors[j++]);

  DivisorStats st;
  st.n = FactoredInteger::from_factors(std::move(merged));
  st.sigma = a.sigma * b.sigma;
  st.s_sigma = a.s_sigma * b.s_sigma;
  st.s_s = a.s_s * b.s_s + a.sigma * b.s_s + b.sigma * a.s_s;
  if (st.s_s != st.s_sigma - st.sigma)
    throw std::logic_error("combine_coprime: triple identity disagrees with S_sigma - sigma");
  return st;
}

void write_csv(std::ostream& out, const ArithmeticTable& table) {
  out << "n,sigma,s,S_sigma,S_s,phi\n";
  for (u64 n = table.lo; n <= table.hi; ++n) {
    u64 i = n - table.lo;
    out << n << ',' << table.sigma[i] << ',' << table.s[i] << ',' << table.s_sigma[i] << ','
        << table.s_s[i] << ',' << table.phi[i] << '\n';
  }
}

}  // namespace aliquot
