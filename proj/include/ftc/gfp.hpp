#pragma once

#include <cstdint>
#include <gmpxx.h>

#include "ftc/errors.hpp"

namespace ftc {

/// Deterministic Miller-Rabin, valid for the full 64-bit range.
bool is_prime_u64(std::uint64_t n);

/// A verified prime modulus. Construction runs the primality check.
class PrimeModulus {
 public:
  explicit PrimeModulus(std::uint64_t p);
  std::uint64_t value() const { return p_; }
  friend bool operator==(PrimeModulus a, PrimeModulus b) { return a.p_ == b.p_; }
  friend bool operator!=(PrimeModulus a, PrimeModulus b) { return a.p_ != b.p_; }

 private:
  std::uint64_t p_;
};

// Raw mod-p helpers on plain words. p need not be prime except for inv_mod.
std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
/// Extended-gcd inverse; throws ZeroInverse when a ≡ 0 (mod p).
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

/// An element of GF(p), always fully reduced.
class Fp {
 public:
  Fp(std::uint64_t value, PrimeModulus m) : v_(value % m.value()), m_(m) {}
  static Fp from_signed(std::int64_t value, PrimeModulus m);

  std::uint64_t value() const { return v_; }
  PrimeModulus modulus() const { return m_; }
  bool is_zero() const { return v_ == 0; }

  Fp operator+(Fp o) const { check(o); return Fp(add_mod(v_, o.v_, p()), m_); }
  Fp operator-(Fp o) const { check(o); return Fp(sub_mod(v_, o.v_, p()), m_); }
  Fp operator*(Fp o) const { check(o); return Fp(mul_mod(v_, o.v_, p()), m_); }
  Fp operator-() const { return Fp(v_ == 0 ? 0 : p() - v_, m_); }
  Fp inverse() const { return Fp(inv_mod(v_, p()), m_); }
  Fp pow(std::uint64_t e) const { return Fp(pow_mod(v_, e, p()), m_); }
  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_ && a.m_ == b.m_; }

 private:
  std::uint64_t p() const { return m_.value(); }
  void check(Fp o) const {
    if (m_ != o.m_) throw DegreeMismatch("Fp arithmetic across different moduli");
  }
  std::uint64_t v_;
  PrimeModulus m_;
};

/// Exact binomial coefficient; 0 when k < 0 or k > n.
mpz_class binom_exact(std::uint64_t n, std::int64_t k);

/// C(n,k) mod p by base-p digit decomposition (Lucas), so n may be far
/// beyond factorial range. 0 when k < 0 or k > n.
std::uint64_t binom_mod(std::uint64_t n, std::uint64_t k, std::uint64_t p);
Fp binom_mod_p(std::uint64_t n, std::int64_t k, PrimeModulus p);

/// Exact rationals (canonical: reduced, positive denominator).
using BigRational = mpq_class;

BigRational make_rational(const mpz_class& num, const mpz_class& den);  // throws DenominatorZero
std::uint64_t rational_mod_p(const BigRational& q, PrimeModulus p);     // throws PDividesDenominator

// Checked exponent arithmetic: degrees and exponents live in a 64-bit
// budget and overflow fails fast instead of wrapping.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_pow(std::uint64_t base, std::uint32_t e);

}  // namespace ftc
