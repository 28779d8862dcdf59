#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "ftc/membership.hpp"

namespace ftc {

struct ColengthOptions {
  MembershipOptions membership;
  // When set, saturation is re-asserted for three further degrees.
  bool check_extra_saturation = false;
};

/// Colength dim_K(R/J) of a cofinite graded ideal, summed degree by degree
/// until the first saturated degree at or past the top generator degree.
/// Throws NotCofinite when no saturation occurs within 3*maxdeg + d.
std::uint64_t colength(std::span<const Poly> gens, const RingContext& ctx,
                       const ColengthOptions& opts = {});

struct HKEntry {
  std::uint32_t e = 0;
  std::uint64_t q = 1;
  std::uint64_t length = 0;
  BigRational normalized;  // length / q^2
};

struct HKSequence {
  std::uint64_t p = 2;
  std::vector<HKEntry> entries;  // colengths strictly increasing in e
};

HKSequence hk_sequence(std::span<const Poly> gens, std::uint32_t e_from, std::uint32_t e_to,
                       const RingContext& ctx, const ColengthOptions& opts = {});

struct HKCompareEntry {
  std::uint32_t e = 0;
  std::uint64_t q = 1;
  std::uint64_t len_ideal = 0;
  std::uint64_t len_with_candidate = 0;
  bool equal = false;
};

/// Per-level comparison of colength(I^[q]) against colength((I,f)^[q]);
/// equality at level e is cross-asserted against f^q in I^[q] from the
/// membership oracle on every entry.
std::vector<HKCompareEntry> hk_compare(std::span<const Poly> gens, const Poly& f,
                                       std::uint32_t e_from, std::uint32_t e_to,
                                       const RingContext& ctx, const ColengthOptions& opts = {});

/// CSV rows "p,e,q,colength,normalized" (no header).
void hk_csv(const HKSequence& seq, std::ostream& os);

}  // namespace ftc
