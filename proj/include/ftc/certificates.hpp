#pragma once

#include <variant>
#include <vector>

#include <json.hpp>

#include "ftc/fermat_ring.hpp"
#include "ftc/membership.hpp"

namespace ftc {

/// The r x s matrix with entry(i,j) = C(a, b+i-j), 1-indexed.
struct BinomialMatrixSpec {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::size_t r = 1, s = 1;
};

std::vector<std::vector<mpz_class>> materialize_exact(const BinomialMatrixSpec& spec);

/// Iterated adjacent-column additions bringing the spec matrix to the form
/// entry(i,j) = C(a+j-1, b+i-1). Only invertible column operations are
/// performed, so the column span is preserved.
std::vector<std::vector<mpz_class>> column_reduce_binomial(const BinomialMatrixSpec& spec);

/// det(C(a, b+i-j))_{r x r} = prod_{t=0}^{r-1} C(a+r-1-t, b) / C(b+t, b).
BigRational van_zeipel_det_exact(std::int64_t a, std::int64_t b, std::size_t r);
Fp van_zeipel_det_mod(std::int64_t a, std::int64_t b, std::size_t r, PrimeModulus p);

/// Membership certificate for p = 7l+3: coefficients a_0..a_{2l} with
/// A a = e_{l+1}, A = (C(4l+2, 2l+1+i-j)); witnesses
/// x^{3p} y^{3p} in (x^{4p}, y^{4p}, z^{4p}), exponent data (28l+12, 4l+2).
struct MembershipCertificate37 {
  std::uint64_t p = 3;
  std::uint64_t ell = 0;
  std::vector<std::uint64_t> coefficients;
  std::uint64_t gen_exponent = 12;   // 4p = 28l+12
  std::uint64_t fermat_power = 2;    // 4l+2
};

/// Non-membership certificate for p = 7l+2: det M5 = prod (3l-t)/(1+t)
/// nonzero mod p plus the integer bookkeeping k = 7l^2+4l, 4p^2 = 28k+16,
/// p(4l+1) = 4k-l+2 <= 4k+2; together they certify
/// x^{3p^2} y^{3p^2} not in (x^{4p^2}, y^{4p^2}, z^{4p^2}).
struct NonMembershipCertificate27 {
  std::uint64_t p = 2;
  std::uint64_t ell = 0;
  std::uint64_t det_m5 = 1;  // mod p
  std::uint64_t k = 0;
};

MembershipCertificate37 build_membership_certificate(std::uint64_t p);
NonMembershipCertificate27 build_nonmembership_certificate(std::uint64_t p);

struct CertificateVerifyOptions {
  // Below this prime the non-membership statement is re-confirmed by the
  // generic oracle in the bivariate strand.
  std::uint64_t oracle_bound = 200;
  MembershipOptions oracle;
};

bool verify_certificate(const MembershipCertificate37& cert, const RingContext& ctx);
bool verify_certificate(const NonMembershipCertificate27& cert, const RingContext& ctx,
                        const CertificateVerifyOptions& opts = {});

/// Does the certificate cover level Q = p^j? Membership certificates cover
/// every j >= 1 (raise the combination); non-membership certificates need
/// the integer comparison p^{j-1}(4l+1) <= floor(4 p^j / 7) which is
/// checked exactly here.
bool nonmembership_holds_at_level(const NonMembershipCertificate27& cert, std::uint32_t j);

nlohmann::json certificate_json(const MembershipCertificate37& cert);
nlohmann::json certificate_json(const NonMembershipCertificate27& cert);

}  // namespace ftc
