#include "ftc/semistability.hpp"

#include <algorithm>

namespace ftc {

std::uint64_t genus_plane_curve(std::uint64_t d) {
  if (d < 1) throw ConfigInvalid("curve degree must be positive");
  return (d - 1) * (d - 2) / 2;
}

std::optional<std::int64_t> balanced_twist(std::int64_t d1, std::int64_t d2, std::int64_t d3) {
  std::int64_t s = d1 + d2 + d3;
  if (s % 2 != 0) return std::nullopt;
  return s / 2;
}

SlopeData syzygy_slope(std::int64_t d1, std::int64_t d2, std::int64_t d3, std::int64_t m,
                       std::uint32_t d) {
  SlopeData out;
  out.rank = 2;
  out.degree = (2 * m - d1 - d2 - d3) * static_cast<std::int64_t>(d);
  return out;
}

namespace {

// The fourth-power construction at exponent q: q = d*l + r with the window
// d/4 <= r < d/3. The 2l+1 products x^t y^t x^{di} y^{d(2l-i)} (x^d+y^d)^{4l+1}
// land, modulo (x^{4q}, y^{4q}), in the 2l monomials x^{t+ds} y^{t+d(6l+1-s)},
// 2l+1 <= s <= 4l, so a kernel vector of the 2l x (2l+1) coefficient matrix
// C(4l+1, s-i) assembles an explicit syzygy of total degree d(6l+1)+3t.
std::optional<InstabilityWitness> window_witness(const RingContext& ctx, std::uint32_t e) {
  const std::uint64_t d = ctx.d();
  const std::uint64_t p = ctx.p();
  const std::uint64_t q = checked_pow(p, e);
  const std::uint64_t r = q % d;
  if (r == 0 || 4 * r < d || 3 * r >= d) return std::nullopt;
  const std::uint64_t l = q / d;
  const std::uint64_t t = 4 * r - d;
  const std::uint64_t four_q = checked_mul(4, q);

  SparseColumns mat;
  mat.rows = 2 * l;  // rows: s = 2l+1 .. 4l
  mat.p = p;
  for (std::uint64_t i = 0; i <= 2 * l; ++i) {
    SparseVec col;
    for (std::uint64_t s = 2 * l + 1; s <= 4 * l; ++s) {
      std::uint64_t v = (s >= i) ? binom_mod(4 * l + 1, s - i, p) : 0;
      if (v) col.emplace_back(static_cast<std::uint32_t>(s - 2 * l - 1),
                              static_cast<std::uint32_t>(v));
    }
    mat.cols.push_back(std::move(col));
  }
  LinSolveResult lin = solve_columns(mat, nullptr, /*want_kernel=*/true);
  if (lin.kernel.empty())
    throw ConsistencyFailure("window kernel unexpectedly empty");
  const std::vector<std::uint32_t>& cvec = lin.kernel.front();

  Poly multiplier = Poly::zero(ctx, t + t + d * 2 * l);
  for (std::uint64_t i = 0; i <= 2 * l; ++i)
    if (cvec[i])
      multiplier = multiplier + Poly::monomial(ctx, t + d * i, t + d * (2 * l - i), 0, cvec[i]);
  Poly product = multiplier * fermat_power_sum(ctx, 4 * l + 1);

  // Every product term is divisible by x^{4q} or y^{4q}; split accordingly.
  Poly h1 = Poly::zero(ctx, product.degree() - four_q);
  Poly h2 = Poly::zero(ctx, product.degree() - four_q);
  for (const auto& [mono, v] : product.terms()) {
    if (mono.a >= four_q)
      h1 = h1 + Poly::monomial(ctx, mono.a - four_q, mono.b, mono.c, v);
    else if (mono.b >= four_q)
      h2 = h2 + Poly::monomial(ctx, mono.a, mono.b - four_q, mono.c, v);
    else
      throw ConsistencyFailure("window product term escaped the kernel reduction");
  }

  InstabilityWitness w;
  w.e = e;
  w.twist = d * (6 * l + 1) + 3 * t;
  Poly zt = Poly::monomial(ctx, 0, 0, t);
  w.syzygy = {zt * h1, zt * h2, multiplier.scaled(p - 1)};

  Poly check = w.syzygy[0] * Poly::monomial(ctx, four_q, 0, 0) +
               w.syzygy[1] * Poly::monomial(ctx, 0, four_q, 0) +
               w.syzygy[2] * Poly::monomial(ctx, 0, 0, four_q);
  if (!check.is_zero()) throw ConsistencyFailure("window syzygy failed to re-verify in R");

  const std::int64_t zero_twist = static_cast<std::int64_t>(6 * q);
  w.sub_degree = (zero_twist - static_cast<std::int64_t>(w.twist)) * static_cast<std::int64_t>(d);
  w.quotient_degree = -w.sub_degree;
  w.note = "window construction at q=p^" + std::to_string(e) + " (r=" + std::to_string(r) +
           ", l=" + std::to_string(l) + ", t=" + std::to_string(t) + ")";
  return w;
}

bool is_pure_power_of(const Poly& g, char var, std::uint64_t exp) {
  if (!g.is_monomial()) return false;
  const auto& [m, v] = *g.terms().begin();
  if (v != 1) return false;
  switch (var) {
    case 'x': return m.a == exp && m.b == 0 && m.c == 0;
    case 'y': return m.a == 0 && m.b == exp && m.c == 0;
    case 'z': return m.a == 0 && m.b == 0 && m.c == exp;
  }
  return false;
}

bool is_fourth_power_family(std::span<const Poly> gens) {
  if (gens.size() != 3) return false;
  bool sx = false, sy = false, sz = false;
  for (const Poly& g : gens) {
    sx = sx || is_pure_power_of(g, 'x', 4);
    sy = sy || is_pure_power_of(g, 'y', 4);
    sz = sz || is_pure_power_of(g, 'z', 4);
  }
  return sx && sy && sz;
}

}  // namespace

InstabilityWitness lemma_syzygy_construction(const RingContext& ctx) {
  const std::uint64_t d = ctx.d();
  const std::uint64_t r = ctx.p() % d;
  if (auto w = window_witness(ctx, 1)) return *w;
  throw HypothesisFailed("no integer r with d/4 <= r < d/3 holds for p mod d = " +
                         std::to_string(r) + ", d = " + std::to_string(d));
}

InstabilityOutcome detect_instability(std::span<const Poly> gens, const RingContext& ctx,
                                      const InstabilitySearchBounds& bounds) {
  if (gens.size() != 3) throw HypothesisFailed("instability search expects 3 generators");
  for (const Poly& g : gens)
    if (g.is_zero() || !(g.ring() == ctx))
      throw EmptyGenerators("bad generator for instability search");

  InstabilityOutcome out;
  const std::uint64_t d = ctx.d();
  const std::int64_t deg_sum = static_cast<std::int64_t>(gens[0].degree()) +
                               static_cast<std::int64_t>(gens[1].degree()) +
                               static_cast<std::int64_t>(gens[2].degree());
  const bool fourth = is_fourth_power_family(gens);

  for (std::uint32_t e = 1; e <= bounds.e_max; ++e) {
    if (fourth) {
      if (auto w = window_witness(ctx, e)) {
        out.witness = std::move(w);
        return out;
      }
    }
    std::uint64_t q;
    try {
      q = checked_pow(ctx.p(), e);
    } catch (const ExponentOverflow&) {
      out.truncated = true;
      break;
    }
    std::vector<Poly> raised;
    std::uint64_t min_deg = ~0ull;
    for (const Poly& g : gens) {
      raised.push_back(frobenius_raise(g, q));
      min_deg = std::min(min_deg, raised.back().degree());
    }
    // Negative twisted degree: 2m' < q * (d1+d2+d3).
    const std::int64_t hi2 = static_cast<std::int64_t>(q) * deg_sum;
    MembershipOptions scan_opts;
    scan_opts.max_dimension = bounds.twist_scan_max_dim;
    for (std::int64_t m = static_cast<std::int64_t>(min_deg); 2 * m < hi2; ++m) {
      FirstSyzygy fs = first_syzygy(raised, static_cast<std::uint64_t>(m), ctx, scan_opts);
      out.truncated = out.truncated || fs.truncated;
      if (fs.syzygy) {
        InstabilityWitness w;
        w.e = e;
        w.twist = static_cast<std::uint64_t>(m);
        w.syzygy = std::move(*fs.syzygy);
        // Twist-gap lower bound; halved exactly when the twist is balanced.
        std::int64_t gap2 = hi2 - 2 * m;
        w.sub_degree = gap2 / 2 * static_cast<std::int64_t>(d);
        w.quotient_degree = -w.sub_degree;
        w.note = "generic twist scan at e=" + std::to_string(e);
        out.witness = std::move(w);
        return out;
      }
    }
  }
  out.note = out.truncated ? "twist scan truncated by the dimension budget" : "";
  return out;
}

nlohmann::json witness_json(const InstabilityWitness& w) {
  nlohmann::json j;
  j["e"] = w.e;
  j["twist"] = w.twist;
  j["sub_degree"] = w.sub_degree;
  j["quotient_degree"] = w.quotient_degree;
  j["note"] = w.note;
  std::vector<std::string> syz;
  for (const Poly& h : w.syzygy) syz.push_back(h.to_string());
  j["syzygy"] = syz;
  return j;
}

}  // namespace ftc
