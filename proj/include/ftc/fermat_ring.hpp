#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ftc/gfp.hpp"

namespace ftc {

/// Monomial x^a y^b z^c in normal form: c < d (z^d rewritten away).
struct NormalMonomial {
  std::uint64_t a = 0, b = 0, c = 0;
  std::uint64_t degree() const { return checked_add(checked_add(a, b), c); }
  friend bool operator==(const NormalMonomial&, const NormalMonomial&) = default;
};

/// Canonical order: lexicographic on (c, b, a) ascending; groups z-strata.
struct MonomialOrder {
  bool operator()(const NormalMonomial& x, const NormalMonomial& y) const {
    if (x.c != y.c) return x.c < y.c;
    if (x.b != y.b) return x.b < y.b;
    return x.a < y.a;
  }
};

/// The (Z/d) x (Z/d) component of the multigrading (x-, y-exponent mod d).
struct Strand {
  std::uint32_t xr = 0, yr = 0;
  friend bool operator==(const Strand&, const Strand&) = default;
};

/// Context for R = GF(p)[x,y,z]/(x^d + y^d - z^d). Cheap to copy (shared
/// immutable state); basis caches are filled lazily behind a lock, so a
/// single context can serve concurrent callers.
class RingContext {
 public:
  RingContext(std::uint32_t d, std::uint64_t p);

  std::uint32_t d() const;
  std::uint64_t p() const;
  PrimeModulus modulus() const;

  /// dim_K R_n = #{(a,b,c) : a+b+c = n, 0 <= c < d}.
  std::uint64_t dim_graded_piece(std::uint64_t n) const;
  /// Monomial basis of R_n in canonical order (cached).
  const std::vector<NormalMonomial>& graded_basis(std::uint64_t n) const;
  /// Position of a normal monomial inside graded_basis(degree).
  std::uint64_t basis_index(const NormalMonomial& m) const;

  friend bool operator==(const RingContext& a, const RingContext& b) {
    return a.d() == b.d() && a.p() == b.p();
  }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

struct RawTerm {
  std::uint64_t a = 0, b = 0, c = 0;  // c unrestricted here
  std::int64_t coeff = 1;
};

/// Homogeneous element of R in normal form: every stored monomial has
/// z-exponent < d and total degree equal to degree(); no zero coefficients.
class Poly {
 public:
  Poly() = default;
  static Poly zero(const RingContext& ring, std::uint64_t degree);
  static Poly monomial(const RingContext& ring, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c, std::uint64_t coeff = 1);

  const RingContext& ring() const { return ring_; }
  std::uint64_t degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  const std::map<NormalMonomial, std::uint64_t, MonomialOrder>& terms() const { return terms_; }
  std::uint64_t coeff(const NormalMonomial& m) const;

  /// Accumulate coeff * x^a y^b z^c, rewriting z^c when c >= d.
  void add_raw(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t coeff);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(std::uint64_t s) const;
  Poly pow(std::uint64_t e) const;

  friend bool operator==(const Poly& f, const Poly& g);
  std::string to_string() const;

 private:
  Poly(const RingContext& ring, std::uint64_t degree) : ring_(ring), degree_(degree) {}
  void check_same_ring(const Poly& o) const;

  RingContext ring_{7, 2};
  std::uint64_t degree_ = 0;
  std::map<NormalMonomial, std::uint64_t, MonomialOrder> terms_;
};

/// Canonical representative of a raw homogeneous polynomial.
Poly normal_form(std::span<const RawTerm> raw, const RingContext& ring);

/// (x^d + y^d)^k, expanded with Lucas binomials; equals z^{dk} in R.
Poly fermat_power_sum(const RingContext& ring, std::uint64_t k);

/// The strand of a polynomial if all of its terms share one, else nullopt.
std::optional<Strand> strand_of(const Poly& f);

/// f^q with a linear-cost path for monomials (exponent scaling).
Poly frobenius_raise(const Poly& f, std::uint64_t q);

/// Parse a compact monomial such as "x3y3", "x^4", "xyz" or "z2".
RawTerm parse_monomial(const std::string& text);

}  // namespace ftc
