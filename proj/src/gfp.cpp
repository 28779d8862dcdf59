#include "ftc/gfp.hpp"

#include <array>

namespace ftc {

namespace {

std::uint64_t mulmod_u128(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod_u128(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod_u128(r, a, p);
    a = mulmod_u128(a, a, p);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  // This witness set is deterministic for all n < 3.3e24.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u128(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u128(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(p) {
  if (!is_prime_u64(p)) throw NotPrime("modulus " + std::to_string(p) + " is not prime");
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  a %= p; b %= p;
  std::uint64_t s = a + b;           // p < 2^63 in all uses; still guard
  if (s < a || s >= p) s -= p;
  return s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  a %= p; b %= p;
  return a >= b ? a - b : a + p - b;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return mulmod_u128(a % p, b % p, p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  return powmod_u128(a, e, p);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw ZeroInverse("inverse of 0 mod " + std::to_string(p));
  // Extended Euclid on (a, p); p prime so gcd is 1.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t; t = new_t; new_t = tmp;
    tmp = r - q * new_r; r = new_r; new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

Fp Fp::from_signed(std::int64_t value, PrimeModulus m) {
  std::int64_t p = static_cast<std::int64_t>(m.value());
  std::int64_t r = value % p;
  if (r < 0) r += p;
  return Fp(static_cast<std::uint64_t>(r), m);
}

mpz_class binom_exact(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, static_cast<unsigned long>(k));
  return r;
}

namespace {

// C(n,k) mod p for 0 <= k <= n < p, multiplicative formula.
std::uint64_t binom_small_mod(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
  if (k > n - k) k = n - k;
  std::uint64_t num = 1, den = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    num = mul_mod(num, (n + 1 - i) % p, p);
    den = mul_mod(den, i % p, p);
  }
  return mul_mod(num, inv_mod(den, p), p);
}

}  // namespace

std::uint64_t binom_mod(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  while (n || k) {
    std::uint64_t nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    r = mul_mod(r, binom_small_mod(nd, kd, p), p);
    n /= p;
    k /= p;
  }
  return r;
}

Fp binom_mod_p(std::uint64_t n, std::int64_t k, PrimeModulus p) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return Fp(0, p);
  return Fp(binom_mod(n, static_cast<std::uint64_t>(k), p.value()), p);
}

BigRational make_rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DenominatorZero("rational with zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

std::uint64_t rational_mod_p(const BigRational& q, PrimeModulus p) {
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class pz(static_cast<unsigned long>(p.value()));
  if (mpz_divisible_p(den.get_mpz_t(), pz.get_mpz_t()))
    throw PDividesDenominator("p divides a denominator");
  mpz_class nr = num % pz, dr = den % pz;
  std::uint64_t n = mpz_get_ui(nr.get_mpz_t());
  if (num < 0 && n != 0) n = p.value() - n;
  std::uint64_t d = mpz_get_ui(dr.get_mpz_t());
  return mul_mod(n, inv_mod(d, p.value()), p.value());
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ExponentOverflow("exponent addition overflows 64 bits");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ExponentOverflow("exponent product overflows 64 bits");
  return r;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace ftc
