#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ftc/fermat_ring.hpp"
#include "ftc/linalg.hpp"

namespace ftc {

struct MembershipOptions {
  // Restrict the system to the candidate's Z/d x Z/d strand whenever every
  // input is supported in a single multidegree.
  bool strand_compression = true;
  // Drop target monomials divisible by a pure x/y-monomial generator; their
  // coordinates are freely absorbable and never constrain the solve.
  bool absorb_pure_powers = true;
  // Hard cap on dense rows/columns after compression.
  std::size_t max_dimension = 4000;
};

struct MembershipResult {
  bool contained = false;
  // IN: combination with sum coefficients[i] * gens[i] == f (re-verified).
  std::vector<Poly> coefficients;
  // OUT: functional on degree-m monomials vanishing on the ideal's piece
  // and nonzero on f (extends by zero outside the compressed rows).
  std::vector<std::pair<NormalMonomial, std::uint64_t>> functional;
  std::size_t rows = 0, cols = 0;
  bool used_strand = false, used_absorption = false;
};

/// Decide f in (g_1,...,g_n) in the graded piece of degree deg f.
MembershipResult membership(const Poly& f, std::span<const Poly> gens, const RingContext& ctx,
                            const MembershipOptions& opts = {});

/// Basis of the syzygies (h_1,...,h_n) with sum h_i g_i = 0, deg h_i g_i = m.
/// Every returned vector is re-verified in R before return.
std::vector<std::vector<Poly>> syzygy_space(std::span<const Poly> gens, std::uint64_t m,
                                            const RingContext& ctx,
                                            const MembershipOptions& opts = {});

struct FirstSyzygy {
  std::optional<std::vector<Poly>> syzygy;
  bool truncated = false;  // some strand skipped for the dimension budget
};
/// Cheapest nonzero syzygy at degree m, if any; early-exits per strand.
FirstSyzygy first_syzygy(std::span<const Poly> gens, std::uint64_t m, const RingContext& ctx,
                         const MembershipOptions& opts = {});

/// dim_K of the degree-n piece of the ideal (g_1,...,g_n).
std::uint64_t graded_ideal_dim(std::span<const Poly> gens, std::uint64_t n,
                               const RingContext& ctx, const MembershipOptions& opts = {});

/// Fully materialized multiplication system at degree m (testing surface).
struct GradedLinearSystem {
  std::uint64_t target_degree = 0;
  std::vector<NormalMonomial> rows;                          // basis of R_m
  std::vector<std::pair<std::size_t, NormalMonomial>> cols;  // (gen index, source monomial)
  SparseColumns matrix;
};
GradedLinearSystem build_graded_system(std::span<const Poly> gens, std::uint64_t m,
                                       const RingContext& ctx);

}  // namespace ftc
