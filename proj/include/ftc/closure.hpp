#pragma once

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "ftc/certificates.hpp"
#include "ftc/membership.hpp"
#include "ftc/semistability.hpp"

namespace ftc {

/// I^[p^e]: generators raised to the p^e-th power.
struct FrobeniusIdeal {
  std::vector<Poly> base;
  std::uint32_t e = 0;
  std::vector<Poly> effective;
};
FrobeniusIdeal frobenius_power(std::span<const Poly> gens, std::uint32_t e,
                               const RingContext& ctx);

enum class VerdictKind { InIdeal, InFrobeniusClosure, OutAtAllTested, TightIn, TightOut, Undecided };
const char* to_string(VerdictKind k);

struct ClosureVerdict {
  VerdictKind kind = VerdictKind::Undecided;
  std::uint32_t e = 0;    // InFrobeniusClosure(e) / OutAtAllTested(e tested)
  std::uint64_t q = 0;    // exponent level actually tested (tight: Q = p^{u+e})
  std::string reason;
  std::optional<MembershipResult> combination;   // verified witness for IN kinds
  std::optional<InstabilityWitness> witness;     // tight route
  std::string certificate_kind;                  // empty when no certificate used
  nlohmann::json certificate;                    // serialized certificate, or null
  // True when the verdict follows the paper-backed route (certificate
  // residues for the degree-7 family); search results stay evidence.
  bool proved_route = false;
};

/// Smallest e <= e_max with f^{p^e} in I^[p^e]; e = 0 is plain membership.
/// Levels skipped for the dimension budget shrink the tested range honestly.
ClosureVerdict in_frobenius_closure(const Poly& f, std::span<const Poly> gens,
                                    std::uint32_t e_max, const RingContext& ctx,
                                    const MembershipOptions& opts = {});

enum class TightRoute { Auto, Certificate, Generic };

struct TightSearchBounds {
  std::uint32_t witness_e_max = 2;
  std::size_t max_dimension = 4000;     // Q-level membership systems
  std::size_t twist_scan_max_dim = 64;  // generic instability scan
  TightRoute route = TightRoute::Auto;
};

/// Tight-closure decision for a three-generator primary ideal with balanced
/// candidate degree. Needs an instability witness at some pull-back level e;
/// then f in I* iff f^Q in I^[Q] for Q = p^{u+e}, p^u >= 2g+1. The binomial
/// certificate route answers the Q-level test for the degree-7 fourth-power
/// family in residues 2 and 3 mod 7; the generic oracle covers the rest
/// within the dimension budget.
ClosureVerdict decide_tight_closure(const Poly& f, std::span<const Poly> gens,
                                    const RingContext& ctx, const TightSearchBounds& bounds = {});

}  // namespace ftc
