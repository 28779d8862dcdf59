#include "ftc/membership.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace ftc {

namespace {

constexpr std::uint64_t kMaxSystemDegree = 1ull << 21;

std::uint64_t pack_mono(const NormalMonomial& m) {
  return ((m.a << 21) | m.b) << 10 | m.c;
}

struct RowSpace {
  std::vector<NormalMonomial> mons;
  std::unordered_map<std::uint64_t, std::uint32_t> index;

  void push(const NormalMonomial& m) {
    index.emplace(pack_mono(m), static_cast<std::uint32_t>(mons.size()));
    mons.push_back(m);
  }
  std::optional<std::uint32_t> find(const NormalMonomial& m) const {
    auto it = index.find(pack_mono(m));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return mons.size(); }
};

struct PurePower {
  std::uint64_t a = 0, b = 0;  // divisor x^a y^b (z-free)
  std::size_t gen_index = 0;
};

bool divisible(const NormalMonomial& m, const PurePower& g) {
  return m.a >= g.a && m.b >= g.b;
}

bool absorbed(const NormalMonomial& m, std::span<const PurePower> abs) {
  for (const PurePower& g : abs)
    if (divisible(m, g)) return true;
  return false;
}

// Enumerate degree-n monomials in a strand (canonical (c,b,a) order reduces
// to ascending b here, since c is pinned by the strand).
template <class F>
void for_strand_basis(const RingContext& ctx, std::uint64_t n, Strand s, F&& fn) {
  const std::uint64_t d = ctx.d();
  const std::uint64_t gamma = ((n % d) + 2 * d - s.xr - s.yr) % d;
  if (gamma > n) return;
  for (std::uint64_t b = s.yr; b + gamma <= n; b += d)
    fn(NormalMonomial{n - gamma - b, b, gamma});
}

std::uint64_t strand_dim(const RingContext& ctx, std::uint64_t n, Strand s) {
  const std::uint64_t d = ctx.d();
  const std::uint64_t gamma = ((n % d) + 2 * d - s.xr - s.yr) % d;
  if (gamma > n || s.yr + gamma > n) return 0;
  return (n - gamma - s.yr) / d + 1;
}

template <class F>
void for_full_basis(const RingContext& ctx, std::uint64_t n, F&& fn) {
  for (const NormalMonomial& m : ctx.graded_basis(n)) fn(m);
}

void check_inputs(std::span<const Poly> gens, const RingContext& ctx) {
  if (gens.empty()) throw EmptyGenerators("no generators given");
  for (const Poly& g : gens) {
    if (!(g.ring() == ctx)) throw DegreeMismatch("generator from a different ring context");
    if (g.is_zero()) throw EmptyGenerators("zero generator");
  }
}

// Scatter g * source into row coordinates; entries outside the row space
// must be absorbed ones (asserted in debug builds).
SparseVec product_column(const Poly& g, const NormalMonomial& src, const RowSpace& rows,
                         [[maybe_unused]] std::span<const PurePower> abs) {
  const RingContext& ctx = g.ring();
  Poly prod = Poly::monomial(ctx, src.a, src.b, src.c) * g;
  SparseVec col;
  col.reserve(prod.terms().size());
  for (const auto& [m, v] : prod.terms()) {
    if (auto idx = rows.find(m)) {
      col.emplace_back(*idx, static_cast<std::uint32_t>(v));
    } else {
      assert(absorbed(m, abs));
    }
  }
  return col;
}

struct SystemPlan {
  bool strand = false;
  Strand target{};
  std::vector<PurePower> absorbable;      // row filter
  std::vector<std::size_t> column_gens;   // indices into gens
};

SystemPlan plan_system(const Poly& f, std::span<const Poly> gens, std::uint64_t m,
                       const MembershipOptions& opts, bool allow_absorb) {
  SystemPlan plan;
  plan.strand = opts.strand_compression;
  if (auto s = strand_of(f); s && !f.is_zero())
    plan.target = *s;
  else if (!f.is_zero())
    plan.strand = false;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Poly& g = gens[i];
    if (g.degree() > m) continue;  // contributes nothing at this degree
    if (plan.strand && !strand_of(g)) plan.strand = false;
    if (allow_absorb && opts.absorb_pure_powers && g.is_monomial()) {
      const auto& [mono, coeff] = *g.terms().begin();
      if (mono.c == 0) {
        plan.absorbable.push_back(PurePower{mono.a, mono.b, i});
        continue;
      }
    }
    plan.column_gens.push_back(i);
  }
  return plan;
}

}  // namespace

MembershipResult membership(const Poly& f, std::span<const Poly> gens, const RingContext& ctx,
                            const MembershipOptions& opts) {
  check_inputs(gens, ctx);
  if (!(f.ring() == ctx)) throw DegreeMismatch("candidate from a different ring context");
  const std::uint64_t m = f.degree();
  if (m >= kMaxSystemDegree) throw ExponentOverflow("degree too large for the dense solver");
  const std::uint64_t p = ctx.p();

  MembershipResult res;
  res.coefficients.assign(gens.size(), Poly());
  for (std::size_t i = 0; i < gens.size(); ++i)
    res.coefficients[i] = Poly::zero(ctx, m >= gens[i].degree() ? m - gens[i].degree() : 0);

  if (f.is_zero()) {
    res.contained = true;
    return res;
  }

  SystemPlan plan = plan_system(f, gens, m, opts, /*allow_absorb=*/true);
  res.used_strand = plan.strand;
  res.used_absorption = !plan.absorbable.empty();

  // Row space: the candidate's strand (or the full piece), minus monomials
  // divisible by an absorbable generator.
  RowSpace rows;
  auto add_row = [&](const NormalMonomial& mon) {
    if (!absorbed(mon, plan.absorbable)) rows.push(mon);
  };
  if (plan.strand)
    for_strand_basis(ctx, m, plan.target, add_row);
  else
    for_full_basis(ctx, m, add_row);
  if (rows.size() > opts.max_dimension)
    throw ExponentOverflow("membership system rows " + std::to_string(rows.size()) +
                           " exceed the dimension budget " + std::to_string(opts.max_dimension));

  SparseColumns sys;
  sys.rows = rows.size();
  sys.p = p;
  std::vector<std::pair<std::size_t, NormalMonomial>> col_meta;
  for (std::size_t gi : plan.column_gens) {
    const Poly& g = gens[gi];
    const std::uint64_t ns = m - g.degree();
    auto add_col = [&](const NormalMonomial& src) {
      sys.cols.push_back(product_column(g, src, rows, plan.absorbable));
      col_meta.emplace_back(gi, src);
    };
    if (plan.strand) {
      Strand gs = *strand_of(g);
      const std::uint32_t d = ctx.d();
      Strand src_strand{static_cast<std::uint32_t>((plan.target.xr + d - gs.xr) % d),
                        static_cast<std::uint32_t>((plan.target.yr + d - gs.yr) % d)};
      for_strand_basis(ctx, ns, src_strand, add_col);
    } else {
      for_full_basis(ctx, ns, add_col);
    }
    if (sys.cols.size() > opts.max_dimension)
      throw ExponentOverflow("membership system columns exceed the dimension budget");
  }
  res.rows = sys.rows;
  res.cols = sys.cols.size();

  SparseVec rhs;
  for (const auto& [mon, v] : f.terms())
    if (auto idx = rows.find(mon)) rhs.emplace_back(*idx, static_cast<std::uint32_t>(v));
  std::sort(rhs.begin(), rhs.end());

  bool contained;
  std::vector<std::uint32_t> solution;
  if (sys.cols.empty()) {
    contained = rhs.empty();
    if (!contained) res.functional.emplace_back(rows.mons[rhs.front().first], 1);
  } else {
    LinSolveResult lin = solve_columns(sys, &rhs, /*want_kernel=*/false);
    contained = lin.consistent;
    if (contained) solution = std::move(lin.solution);
    else
      for (auto [ri, v] : lin.functional) res.functional.emplace_back(rows.mons[ri], v);
  }

  if (contained) {
    for (std::size_t j = 0; j < solution.size(); ++j) {
      if (solution[j] == 0) continue;
      auto [gi, src] = col_meta[j];
      res.coefficients[gi] =
          res.coefficients[gi] + Poly::monomial(ctx, src.a, src.b, src.c, solution[j]);
    }
    // The residual lives in the absorbable coordinate subspace; divide out.
    Poly residual = f;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (!res.coefficients[i].is_zero()) residual = residual - res.coefficients[i] * gens[i];
    for (const auto& [mon, v] : residual.terms()) {
      const PurePower* found = nullptr;
      for (const PurePower& g : plan.absorbable)
        if (divisible(mon, g)) { found = &g; break; }
      if (!found)
        throw ConsistencyFailure("membership residual not divisible by a pure-power generator");
      res.coefficients[found->gen_index] =
          res.coefficients[found->gen_index] +
          Poly::monomial(ctx, mon.a - found->a, mon.b - found->b, mon.c, v);
    }
    // Unconditional re-check: the combination must reproduce f exactly.
    Poly check = Poly::zero(ctx, m);
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (!res.coefficients[i].is_zero()) check = check + res.coefficients[i] * gens[i];
    if (!(check == f))
      throw ConsistencyFailure("membership combination failed to re-multiply to the candidate");
    res.contained = true;
  } else {
    // Unconditional re-check of the separating functional.
    std::unordered_map<std::uint64_t, std::uint64_t> w;
    for (const auto& [mon, v] : res.functional) w.emplace(pack_mono(mon), v);
    auto pair_with = [&](const Poly& g) {
      std::uint64_t acc = 0;
      for (const auto& [mon, v] : g.terms()) {
        auto it = w.find(pack_mono(mon));
        if (it != w.end()) acc = add_mod(acc, mul_mod(it->second, v, p), p);
      }
      return acc;
    };
    if (pair_with(f) == 0)
      throw ConsistencyFailure("separating functional vanishes on the candidate");
    for (const SparseVec& col : sys.cols) {
      std::uint64_t acc = 0;
      for (auto [ri, v] : col) {
        auto it = w.find(pack_mono(rows.mons[ri]));
        if (it != w.end()) acc = add_mod(acc, mul_mod(it->second, v, p), p);
      }
      if (acc != 0) throw ConsistencyFailure("separating functional hits an ideal column");
    }
    res.contained = false;
  }
  return res;
}

namespace {

// Kernel extraction shared by syzygy_space and first_syzygy. Builds the
// system for one target strand (or the full piece) with no absorption.
struct StrandSystem {
  SparseColumns sys;
  std::vector<std::pair<std::size_t, NormalMonomial>> col_meta;
  std::size_t rows = 0;
};

// Arithmetic (rows, cols) count of the syzygy system, no materialization.
std::pair<std::uint64_t, std::uint64_t> syzygy_system_shape(std::span<const Poly> gens,
                                                            std::uint64_t m,
                                                            const RingContext& ctx,
                                                            std::optional<Strand> target) {
  std::uint64_t rows = target ? strand_dim(ctx, m, *target) : ctx.dim_graded_piece(m);
  std::uint64_t cols = 0;
  const std::uint32_t d = ctx.d();
  for (const Poly& g : gens) {
    if (g.degree() > m) continue;
    const std::uint64_t ns = m - g.degree();
    if (target) {
      Strand gs = *strand_of(g);
      Strand src{static_cast<std::uint32_t>((target->xr + d - gs.xr) % d),
                 static_cast<std::uint32_t>((target->yr + d - gs.yr) % d)};
      cols += strand_dim(ctx, ns, src);
    } else {
      cols += ctx.dim_graded_piece(ns);
    }
  }
  return {rows, cols};
}

StrandSystem build_syzygy_system(std::span<const Poly> gens, std::uint64_t m,
                                 const RingContext& ctx, std::optional<Strand> target) {
  StrandSystem out;
  RowSpace rows;
  if (target)
    for_strand_basis(ctx, m, *target, [&](const NormalMonomial& mon) { rows.push(mon); });
  else
    for_full_basis(ctx, m, [&](const NormalMonomial& mon) { rows.push(mon); });
  out.sys.rows = rows.size();
  out.sys.p = ctx.p();
  out.rows = rows.size();
  const std::uint32_t d = ctx.d();
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const Poly& g = gens[gi];
    if (g.degree() > m) continue;
    const std::uint64_t ns = m - g.degree();
    auto add_col = [&](const NormalMonomial& src) {
      out.sys.cols.push_back(product_column(g, src, rows, {}));
      out.col_meta.emplace_back(gi, src);
    };
    if (target) {
      Strand gs = *strand_of(g);
      Strand src_strand{static_cast<std::uint32_t>((target->xr + d - gs.xr) % d),
                        static_cast<std::uint32_t>((target->yr + d - gs.yr) % d)};
      for_strand_basis(ctx, ns, src_strand, add_col);
    } else {
      for_full_basis(ctx, ns, add_col);
    }
  }
  return out;
}

std::vector<Poly> kernel_to_syzygy(const std::vector<std::uint32_t>& vec,
                                   const StrandSystem& system, std::span<const Poly> gens,
                                   std::uint64_t m, const RingContext& ctx) {
  std::vector<Poly> h(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    h[i] = Poly::zero(ctx, m >= gens[i].degree() ? m - gens[i].degree() : 0);
  for (std::size_t j = 0; j < vec.size(); ++j) {
    if (vec[j] == 0) continue;
    auto [gi, src] = system.col_meta[j];
    h[gi] = h[gi] + Poly::monomial(ctx, src.a, src.b, src.c, vec[j]);
  }
  Poly check = Poly::zero(ctx, m);
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!h[i].is_zero()) check = check + h[i] * gens[i];
  if (!check.is_zero()) throw ConsistencyFailure("syzygy failed to re-verify in R");
  return h;
}

bool all_stranded(std::span<const Poly> gens) {
  for (const Poly& g : gens)
    if (!strand_of(g)) return false;
  return true;
}

}  // namespace

std::vector<std::vector<Poly>> syzygy_space(std::span<const Poly> gens, std::uint64_t m,
                                            const RingContext& ctx,
                                            const MembershipOptions& opts) {
  check_inputs(gens, ctx);
  if (m >= kMaxSystemDegree) throw ExponentOverflow("degree too large for the dense solver");
  std::vector<std::vector<Poly>> result;
  const bool stranded = opts.strand_compression && all_stranded(gens);
  auto handle = [&](std::optional<Strand> target) {
    auto [n_rows, n_cols] = syzygy_system_shape(gens, m, ctx, target);
    if (n_cols == 0) return;
    if (n_rows > opts.max_dimension || n_cols > opts.max_dimension)
      throw ExponentOverflow("syzygy system exceeds the dimension budget");
    StrandSystem system = build_syzygy_system(gens, m, ctx, target);
    LinSolveResult lin = solve_columns(system.sys, nullptr, /*want_kernel=*/true);
    for (const auto& vec : lin.kernel)
      result.push_back(kernel_to_syzygy(vec, system, gens, m, ctx));
  };
  if (stranded) {
    const std::uint32_t d = ctx.d();
    for (std::uint32_t xr = 0; xr < d; ++xr)
      for (std::uint32_t yr = 0; yr < d; ++yr) handle(Strand{xr, yr});
  } else {
    handle(std::nullopt);
  }
  return result;
}

FirstSyzygy first_syzygy(std::span<const Poly> gens, std::uint64_t m, const RingContext& ctx,
                         const MembershipOptions& opts) {
  check_inputs(gens, ctx);
  FirstSyzygy out;
  if (m >= kMaxSystemDegree) { out.truncated = true; return out; }
  const bool stranded = opts.strand_compression && all_stranded(gens);
  auto handle = [&](std::optional<Strand> target) -> bool {
    StrandSystem system = build_syzygy_system(gens, m, ctx, target);
    if (system.sys.cols.empty()) return false;
    if (system.rows > opts.max_dimension || system.sys.cols.size() > opts.max_dimension) {
      out.truncated = true;
      return false;
    }
    LinSolveResult lin = solve_columns(system.sys, nullptr, /*want_kernel=*/true);
    if (lin.kernel.empty()) return false;
    out.syzygy = kernel_to_syzygy(lin.kernel.front(), system, gens, m, ctx);
    return true;
  };
  if (stranded) {
    const std::uint32_t d = ctx.d();
    for (std::uint32_t xr = 0; xr < d && !out.syzygy; ++xr)
      for (std::uint32_t yr = 0; yr < d && !out.syzygy; ++yr) handle(Strand{xr, yr});
  } else {
    handle(std::nullopt);
  }
  return out;
}

std::uint64_t graded_ideal_dim(std::span<const Poly> gens, std::uint64_t n,
                               const RingContext& ctx, const MembershipOptions& opts) {
  check_inputs(gens, ctx);
  if (n >= kMaxSystemDegree) throw ExponentOverflow("degree too large for the dense solver");
  SystemPlan plan;
  plan.strand = false;
  // Reuse the absorption split; strand restriction is handled by looping
  // over all strands when every generator is stranded.
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Poly& g = gens[i];
    if (g.degree() > n) continue;
    if (opts.absorb_pure_powers && g.is_monomial()) {
      const auto& [mono, coeff] = *g.terms().begin();
      if (mono.c == 0) {
        plan.absorbable.push_back(PurePower{mono.a, mono.b, i});
        continue;
      }
    }
    plan.column_gens.push_back(i);
  }

  std::vector<Poly> col_polys;
  for (std::size_t gi : plan.column_gens) col_polys.push_back(gens[gi]);
  const bool stranded = opts.strand_compression && all_stranded(gens);

  std::uint64_t total = 0;
  auto handle = [&](std::optional<Strand> target) {
    RowSpace rows;
    std::uint64_t absorbed_count = 0;
    auto add_row = [&](const NormalMonomial& mon) {
      if (absorbed(mon, plan.absorbable)) ++absorbed_count;
      else rows.push(mon);
    };
    if (target) for_strand_basis(ctx, n, *target, add_row);
    else for_full_basis(ctx, n, add_row);
    total += absorbed_count;
    if (rows.size() == 0) return;
    SparseColumns sys;
    sys.rows = rows.size();
    sys.p = ctx.p();
    const std::uint32_t d = ctx.d();
    for (std::size_t gi : plan.column_gens) {
      const Poly& g = gens[gi];
      const std::uint64_t ns = n - g.degree();
      auto add_col = [&](const NormalMonomial& src) {
        sys.cols.push_back(product_column(g, src, rows, plan.absorbable));
      };
      if (target) {
        Strand gs = *strand_of(g);
        Strand src_strand{static_cast<std::uint32_t>((target->xr + d - gs.xr) % d),
                          static_cast<std::uint32_t>((target->yr + d - gs.yr) % d)};
        for_strand_basis(ctx, ns, src_strand, add_col);
      } else {
        for_full_basis(ctx, ns, add_col);
      }
    }
    if (rows.size() > opts.max_dimension || sys.cols.size() > opts.max_dimension)
      throw ExponentOverflow("rank system exceeds the dimension budget");
    if (!sys.cols.empty()) total += rank_columns(sys);
  };
  if (stranded) {
    const std::uint32_t d = ctx.d();
    for (std::uint32_t xr = 0; xr < d; ++xr)
      for (std::uint32_t yr = 0; yr < d; ++yr) handle(Strand{xr, yr});
  } else {
    handle(std::nullopt);
  }
  return total;
}

GradedLinearSystem build_graded_system(std::span<const Poly> gens, std::uint64_t m,
                                       const RingContext& ctx) {
  check_inputs(gens, ctx);
  if (m >= kMaxSystemDegree) throw ExponentOverflow("degree too large for the dense solver");
  GradedLinearSystem out;
  out.target_degree = m;
  RowSpace rows;
  for_full_basis(ctx, m, [&](const NormalMonomial& mon) { rows.push(mon); });
  out.rows = rows.mons;
  out.matrix.rows = rows.size();
  out.matrix.p = ctx.p();
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const Poly& g = gens[gi];
    if (g.degree() > m) continue;
    for (const NormalMonomial& src : ctx.graded_basis(m - g.degree())) {
      out.matrix.cols.push_back(product_column(g, src, rows, {}));
      out.cols.emplace_back(gi, src);
    }
  }
  return out;
}

}  // namespace ftc
