#include "ftc/certificates.hpp"

#include <algorithm>

namespace ftc {

namespace {

mpz_class binom_z(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  return binom_exact(static_cast<std::uint64_t>(n), k);
}

}  // namespace

std::vector<std::vector<mpz_class>> materialize_exact(const BinomialMatrixSpec& spec) {
  std::vector<std::vector<mpz_class>> m(spec.r, std::vector<mpz_class>(spec.s));
  for (std::size_t i = 1; i <= spec.r; ++i)
    for (std::size_t j = 1; j <= spec.s; ++j)
      m[i - 1][j - 1] = binom_z(spec.a, spec.b + static_cast<std::int64_t>(i) -
                                            static_cast<std::int64_t>(j));
  return m;
}

std::vector<std::vector<mpz_class>> column_reduce_binomial(const BinomialMatrixSpec& spec) {
  auto m = materialize_exact(spec);
  // Pass k leaves columns 1..k alone and adds each column to its right
  // neighbour, right to left; s-1 passes reach C(a+j-1, b+i-1).
  for (std::size_t pass = 1; pass < spec.s; ++pass)
    for (std::size_t j = spec.s; j > pass; --j)
      for (std::size_t i = 0; i < spec.r; ++i)
        m[i][j - 1] += m[i][j - 2];
  return m;
}

BigRational van_zeipel_det_exact(std::int64_t a, std::int64_t b, std::size_t r) {
  if (r < 1) throw ConfigInvalid("determinant of an empty matrix");
  BigRational det(1);
  for (std::size_t t = 0; t < r; ++t) {
    mpz_class num = binom_z(a + static_cast<std::int64_t>(r) - 1 - static_cast<std::int64_t>(t), b);
    mpz_class den = binom_z(b + static_cast<std::int64_t>(t), b);
    if (den == 0) throw DenominatorZero("van Zeipel denominator C(b+t,b) = 0");
    det *= make_rational(num, den);
  }
  det.canonicalize();
  return det;
}

Fp van_zeipel_det_mod(std::int64_t a, std::int64_t b, std::size_t r, PrimeModulus p) {
  if (r < 1) throw ConfigInvalid("determinant of an empty matrix");
  if (b < 0) throw DenominatorZero("van Zeipel denominator C(b+t,b) = 0");
  std::uint64_t det = 1 % p.value();
  for (std::size_t t = 0; t < r; ++t) {
    std::int64_t top = a + static_cast<std::int64_t>(r) - 1 - static_cast<std::int64_t>(t);
    std::uint64_t num = top < 0 ? 0 : binom_mod(static_cast<std::uint64_t>(top),
                                                static_cast<std::uint64_t>(b), p.value());
    std::uint64_t den = binom_mod(static_cast<std::uint64_t>(b) + t,
                                  static_cast<std::uint64_t>(b), p.value());
    if (den == 0) throw PDividesDenominator("p divides a van Zeipel denominator");
    det = mul_mod(det, mul_mod(num, inv_mod(den, p.value()), p.value()), p.value());
  }
  return Fp(det, p);
}

MembershipCertificate37 build_membership_certificate(std::uint64_t p) {
  PrimeModulus pm(p);
  if (p % 7 != 3) throw HypothesisFailed("membership certificate needs p = 3 mod 7");
  const std::uint64_t l = (p - 3) / 7;
  MembershipCertificate37 cert;
  cert.p = p;
  cert.ell = l;
  cert.gen_exponent = 28 * l + 12;
  cert.fermat_power = 4 * l + 2;

  // The coefficient matrix is invertible: every binomial in the van Zeipel
  // product has arguments below p.
  Fp det = van_zeipel_det_mod(static_cast<std::int64_t>(4 * l + 2),
                              static_cast<std::int64_t>(2 * l + 1), 2 * l + 1, pm);
  if (det.is_zero())
    throw SingularSystem("membership certificate matrix singular mod " + std::to_string(p));

  const std::size_t n = 2 * l + 1;
  SparseColumns sys;
  sys.rows = n;
  sys.p = p;
  for (std::size_t j = 1; j <= n; ++j) {
    SparseVec col;
    for (std::size_t i = 1; i <= n; ++i) {
      std::int64_t k = static_cast<std::int64_t>(2 * l + 1 + i) - static_cast<std::int64_t>(j);
      std::uint64_t v = k < 0 ? 0 : binom_mod(4 * l + 2, static_cast<std::uint64_t>(k), p);
      if (v) col.emplace_back(static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(v));
    }
    sys.cols.push_back(std::move(col));
  }
  SparseVec rhs{{static_cast<std::uint32_t>(l), 1}};
  LinSolveResult lin = solve_columns(sys, &rhs, false);
  if (!lin.consistent)
    throw SingularSystem("membership certificate system unsolvable mod " + std::to_string(p));
  cert.coefficients.assign(lin.solution.begin(), lin.solution.end());

  // Re-check A a = e_{l+1} directly.
  for (std::size_t i = 1; i <= n; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      std::int64_t k = static_cast<std::int64_t>(2 * l + 1 + i) - static_cast<std::int64_t>(j);
      if (k < 0) continue;
      acc = add_mod(acc, mul_mod(binom_mod(4 * l + 2, static_cast<std::uint64_t>(k), p),
                                 cert.coefficients[j - 1], p), p);
    }
    if (acc != (i == l + 1 ? 1u : 0u))
      throw SingularSystem("membership certificate coefficients fail A a = e");
  }
  return cert;
}

bool verify_certificate(const MembershipCertificate37& cert, const RingContext& ctx) {
  if (ctx.d() != 7 || ctx.p() != cert.p) return false;
  const std::uint64_t p = cert.p, l = cert.ell;
  if (cert.coefficients.size() != 2 * l + 1) return false;
  if (cert.gen_exponent != 28 * l + 12 || cert.fermat_power != 4 * l + 2) return false;

  // Compressed variables X = x^7, Y = y^7: the product
  // (sum a_i X^i Y^{2l-i}) (X+Y)^{4l+2} must reduce, modulo the monomials
  // absorbed by x^{28l+12} and y^{28l+12}, to the single term X^{3l+1}Y^{3l+1}.
  std::vector<std::uint64_t> conv(6 * l + 3, 0);
  for (std::uint64_t i = 0; i <= 2 * l; ++i) {
    if (cert.coefficients[i] == 0) continue;
    for (std::uint64_t j = 0; j <= 4 * l + 2; ++j) {
      std::uint64_t s = i + j;
      conv[s] = add_mod(conv[s],
                        mul_mod(cert.coefficients[i], binom_mod(4 * l + 2, j, p), p), p);
    }
  }
  for (std::uint64_t s = 2 * l + 1; s <= 4 * l + 1; ++s)
    if (conv[s] != (s == 3 * l + 1 ? 1u : 0u)) return false;

  // Full ring identity at level p: reconstruct the combination for
  // x^{3p} y^{3p} in (x^{4p}, y^{4p}, z^{4p}) and re-multiply exactly.
  const std::uint64_t fourp = 4 * p;
  Poly u3 = Poly::zero(ctx, 14 * l);
  for (std::uint64_t i = 0; i <= 2 * l; ++i)
    if (cert.coefficients[i])
      u3 = u3 + Poly::monomial(ctx, 7 * i, 7 * (2 * l - i), 0, cert.coefficients[i]);
  Poly product = u3 * fermat_power_sum(ctx, 4 * l + 2);
  Poly fbiv = Poly::monomial(ctx, 7 * (3 * l + 1), 7 * (3 * l + 1), 0);
  Poly diff = product - fbiv;
  Poly u1 = Poly::zero(ctx, diff.degree() - fourp);
  Poly u2 = Poly::zero(ctx, diff.degree() - fourp);
  for (const auto& [mono, v] : diff.terms()) {
    if (mono.a >= fourp)
      u1 = u1 + Poly::monomial(ctx, mono.a - fourp, mono.b, mono.c, v);
    else if (mono.b >= fourp)
      u2 = u2 + Poly::monomial(ctx, mono.a, mono.b - fourp, mono.c, v);
    else
      return false;
  }
  Poly xy2 = Poly::monomial(ctx, 2, 2, 0);
  Poly h1 = (xy2 * u1).scaled(p - 1);
  Poly h2 = (xy2 * u2).scaled(p - 1);
  Poly h3 = xy2 * u3 * Poly::monomial(ctx, 0, 0, 2);
  Poly combo = h1 * Poly::monomial(ctx, fourp, 0, 0) + h2 * Poly::monomial(ctx, 0, fourp, 0) +
               h3 * Poly::monomial(ctx, 0, 0, fourp);
  return combo == Poly::monomial(ctx, 3 * p, 3 * p, 0);
}

NonMembershipCertificate27 build_nonmembership_certificate(std::uint64_t p) {
  PrimeModulus pm(p);
  if (p % 7 != 2) throw HypothesisFailed("non-membership certificate needs p = 2 mod 7");
  const std::uint64_t l = (p - 2) / 7;
  NonMembershipCertificate27 cert;
  cert.p = p;
  cert.ell = l;
  cert.k = checked_add(checked_mul(7, checked_mul(l, l)), checked_mul(4, l));

  std::uint64_t det = 1 % p;
  for (std::uint64_t t = 0; t < l; ++t)
    det = mul_mod(det, mul_mod(3 * l - t, inv_mod(1 + t, p), p), p);
  cert.det_m5 = det;
  if (l > 0 && det == 0)
    throw ZeroDeterminant("det M5 vanished mod " + std::to_string(p));

  // Integer bookkeeping: p^2 = 7k+4, 4p^2 = 28k+16, p(4l+1) = 4k-l+2,
  // the last strictly below 4k+2 once l > 0.
  const std::uint64_t p2 = checked_mul(p, p);
  bool ok = (p2 == checked_add(checked_mul(7, cert.k), 4)) &&
            (checked_mul(4, p2) == checked_add(checked_mul(28, cert.k), 16)) &&
            (checked_mul(p, 4 * l + 1) == checked_mul(4, cert.k) - l + 2) &&
            (l == 0 || checked_mul(4, cert.k) - l + 2 < checked_mul(4, cert.k) + 2);
  if (!ok) throw ConsistencyFailure("non-membership exponent identities failed");
  return cert;
}

bool nonmembership_holds_at_level(const NonMembershipCertificate27& cert, std::uint32_t j) {
  if (j < 1) return false;
  // z^{4Q} = (x^7+y^7)^K z^c with K = (4Q - c)/7; the bivariate statement is
  // at Fermat power W = p^{j-1}(4l+1) and rules out the ring membership
  // whenever W <= K.
  const std::uint64_t Q = checked_pow(cert.p, j);
  const std::uint64_t fourQ = checked_mul(4, Q);
  const std::uint64_t K = fourQ / 7;
  const std::uint64_t W = checked_mul(checked_pow(cert.p, j - 1), 4 * cert.ell + 1);
  return W <= K;
}

bool verify_certificate(const NonMembershipCertificate27& cert, const RingContext& ctx,
                        const CertificateVerifyOptions& opts) {
  if (ctx.d() != 7 || ctx.p() != cert.p) return false;
  const std::uint64_t p = cert.p, l = cert.ell;
  if (p != 7 * l + 2) return false;

  // det M5 twice over: the closed product and the binomial identity
  // prod (3l-t)/(1+t) = C(3l, l).
  std::uint64_t det = 1 % p;
  for (std::uint64_t t = 0; t < l; ++t)
    det = mul_mod(det, mul_mod(3 * l - t, inv_mod(1 + t, p), p), p);
  if (det != cert.det_m5) return false;
  if (det != binom_mod(3 * l, l, p)) return false;
  if (l > 0 && det == 0) return false;

  const std::uint64_t p2 = checked_mul(p, p);
  if (p2 != checked_add(checked_mul(7, cert.k), 4)) return false;
  if (checked_mul(4, p2) != checked_add(checked_mul(28, cert.k), 16)) return false;
  if (checked_mul(p, 4 * l + 1) != checked_mul(4, cert.k) - l + 2) return false;
  if (!nonmembership_holds_at_level(cert, 2)) return false;

  if (p <= opts.oracle_bound) {
    // Independent confirmation in the bivariate strand:
    // x^{3p} y^{3p} not in (x^{4p}, y^{4p}, (x^7+y^7)^{4l+1}).
    Poly f = Poly::monomial(ctx, 3 * p, 3 * p, 0);
    std::vector<Poly> gens = {Poly::monomial(ctx, 4 * p, 0, 0), Poly::monomial(ctx, 0, 4 * p, 0),
                              fermat_power_sum(ctx, 4 * l + 1)};
    MembershipResult oracle = membership(f, gens, ctx, opts.oracle);
    if (oracle.contained) return false;
  }
  return true;
}

nlohmann::json certificate_json(const MembershipCertificate37& cert) {
  nlohmann::json j;
  j["kind"] = "membership-3mod7";
  j["p"] = cert.p;
  j["ell"] = cert.ell;
  j["coefficients"] = cert.coefficients;
  j["exponent_identities"] = {{"gen_exponent", cert.gen_exponent},
                              {"fermat_power", cert.fermat_power},
                              {"target", {3 * cert.p, 3 * cert.p}}};
  return j;
}

nlohmann::json certificate_json(const NonMembershipCertificate27& cert) {
  nlohmann::json j;
  j["kind"] = "nonmembership-2mod7";
  j["p"] = cert.p;
  j["ell"] = cert.ell;
  j["det_m5"] = cert.det_m5;
  j["exponent_identities"] = {{"k", cert.k},
                              {"four_p_squared", 28 * cert.k + 16},
                              {"p_times_4l_plus_1", 4 * cert.k - cert.ell + 2},
                              {"bound", 4 * cert.k + 2}};
  return j;
}

}  // namespace ftc
