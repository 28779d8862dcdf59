#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftc/fermat_ring.hpp"
#include "ftc/membership.hpp"

namespace ftc {

/// Genus of a smooth plane curve of degree d: (d-1)(d-2)/2.
std::uint64_t genus_plane_curve(std::uint64_t d);

/// The twist m with 2m = d1+d2+d3, at which Syz(f1,f2,f3)(m) has degree 0;
/// nullopt when the sum is odd (non-integral twist).
std::optional<std::int64_t> balanced_twist(std::int64_t d1, std::int64_t d2, std::int64_t d3);

/// Degree/rank bookkeeping for Syz(f1,f2,f3)(m) on the degree-d Fermat curve.
struct SlopeData {
  std::int64_t degree = 0;  // (2m - d1 - d2 - d3) * d, in actual O_C-degree units
  std::int64_t rank = 2;
  BigRational slope() const { return make_rational(degree, rank); }
};
SlopeData syzygy_slope(std::int64_t d1, std::int64_t d2, std::int64_t d3, std::int64_t m,
                       std::uint32_t d);

/// A section of a negative twist of the e-th pull-back syzygy bundle:
/// destabilizing evidence. The syzygy is stated against the raised
/// generators and re-verifies exactly in R.
struct InstabilityWitness {
  std::uint32_t e = 1;
  std::uint64_t twist = 0;           // total degree m' of the syzygy
  std::vector<Poly> syzygy;          // (h_1, h_2, h_3)
  std::int64_t sub_degree = 0;       // >= (p^e m - m') * d, the twist-gap bound
  std::int64_t quotient_degree = 0;  // -sub_degree
  std::string note;
};

/// The explicit first-pull-back construction for I = (x^4,y^4,z^4): requires
/// p = d*l + r with d/4 <= r < d/3, gives a syzygy of total degree
/// d(6l+1)+3t, t = 4r-d, and twisted bundle degree 12r-4d < 0.
InstabilityWitness lemma_syzygy_construction(const RingContext& ctx);

struct InstabilitySearchBounds {
  std::uint32_t e_max = 2;
  std::size_t twist_scan_max_dim = 64;  // per-strand cap in the generic twist scan
};

struct InstabilityOutcome {
  std::optional<InstabilityWitness> witness;
  bool truncated = false;  // part of the search skipped for the budget
  std::string note;
};

/// Search e = 1..e_max for a syzygy of (f_i^{p^e}) at a twist strictly below
/// the slope-zero threshold. The fourth-power window construction is used
/// at any level e where q = p^e satisfies the window; otherwise the twist
/// range is scanned with the kernel solver.
InstabilityOutcome detect_instability(std::span<const Poly> gens, const RingContext& ctx,
                                      const InstabilitySearchBounds& bounds = {});

nlohmann::json witness_json(const InstabilityWitness& w);

}  // namespace ftc
