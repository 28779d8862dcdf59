#include "ftc/linalg.hpp"

#include <algorithm>
#include <cstring>

#include "ftc/gfp.hpp"

namespace ftc {

namespace {

// ---------------------------------------------------------------------
// Word-per-entry rows with Barrett reduction, p < 2^31.
// ---------------------------------------------------------------------

struct Barrett {
  std::uint64_t p = 2;
  std::uint64_t magic = 0;  // floor(2^64 / p)

  void init(std::uint64_t modulus) {
    p = modulus;
    // floor(2^64 / p); p is odd here, so this equals floor((2^64 - 1) / p).
    magic = ~0ull / p;
  }
  // Valid for any x < 2^64; result fully reduced.
  std::uint64_t reduce(std::uint64_t x) const {
    std::uint64_t q = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(x) * magic) >> 64);
    std::uint64_t r = x - q * p;
    if (r >= p) r -= p;
    return r;
  }
};

class WordRows {
 public:
  WordRows(std::size_t nrows, std::size_t ncols, std::uint64_t p)
      : nrows_(nrows), ncols_(ncols), data_(nrows * ncols, 0) {
    br_.init(p);
  }
  std::uint32_t* row(std::size_t i) { return data_.data() + i * ncols_; }
  const std::uint32_t* row(std::size_t i) const { return data_.data() + i * ncols_; }
  std::size_t cols() const { return ncols_; }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap_ranges(row(i), row(i) + ncols_, row(j));
  }
  void scale_row(std::size_t i, std::uint64_t s) {
    std::uint32_t* r = row(i);
    for (std::size_t k = 0; k < ncols_; ++k)
      r[k] = static_cast<std::uint32_t>(br_.reduce(s * r[k]));
  }
  // dst += mult * src
  void axpy(std::size_t dst, std::size_t src, std::uint64_t mult) {
    if (mult == 0) return;
    std::uint32_t* d = row(dst);
    const std::uint32_t* s = row(src);
    for (std::size_t k = 0; k < ncols_; ++k)
      d[k] = static_cast<std::uint32_t>(br_.reduce(d[k] + mult * s[k]));
  }

 private:
  std::size_t nrows_, ncols_;
  std::vector<std::uint32_t> data_;
  Barrett br_;
};

// ---------------------------------------------------------------------
// Packed bit rows for GF(2).
// ---------------------------------------------------------------------

class BitRows {
 public:
  BitRows(std::size_t nrows, std::size_t ncols)
      : ncols_(ncols), words_((ncols + 63) / 64), data_(nrows * words_, 0) {}
  std::uint64_t* row(std::size_t i) { return data_.data() + i * words_; }
  const std::uint64_t* row(std::size_t i) const { return data_.data() + i * words_; }

  bool get(std::size_t i, std::size_t k) const {
    return (row(i)[k >> 6] >> (k & 63)) & 1;
  }
  void set(std::size_t i, std::size_t k) { row(i)[k >> 6] |= 1ull << (k & 63); }
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap_ranges(row(i), row(i) + words_, row(j));
  }
  void xor_rows(std::size_t dst, std::size_t src) {
    std::uint64_t* d = row(dst);
    const std::uint64_t* s = row(src);
    for (std::size_t w = 0; w < words_; ++w) d[w] ^= s[w];
  }

 private:
  std::size_t ncols_, words_;
  std::vector<std::uint64_t> data_;
};

// ---------------------------------------------------------------------
// RREF of the transposed system. The input columns become rows of M; a
// transform U (starting as the identity) tracks row operations so that
// kernel vectors and solution coefficients come out in column coordinates.
// ---------------------------------------------------------------------

struct EchelonWord {
  std::size_t n, m;          // n = #columns of A (rows here), m = #rows of A
  WordRows M, U;
  std::vector<std::size_t> pivots;  // pivot position (in [0,m)) per echelon row

  EchelonWord(const SparseColumns& a)
      : n(a.cols.size()), m(a.rows), M(n, a.rows, a.p), U(n, n, a.p) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uint32_t* r = M.row(j);
      for (auto [ri, v] : a.cols[j]) r[ri] = v;
      U.row(j)[j] = 1;
    }
    run(a.p);
  }

  void run(std::uint64_t p) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m && rank < n; ++col) {
      std::size_t piv = rank;
      while (piv < n && M.row(piv)[col] == 0) ++piv;
      if (piv == n) continue;
      M.swap_rows(rank, piv);
      U.swap_rows(rank, piv);
      std::uint64_t inv = inv_mod(M.row(rank)[col], p);
      if (inv != 1) { M.scale_row(rank, inv); U.scale_row(rank, inv); }
      for (std::size_t i = rank + 1; i < n; ++i) {
        std::uint64_t v = M.row(i)[col];
        if (v) {
          std::uint64_t mult = p - v;
          M.axpy(i, rank, mult);
          U.axpy(i, rank, mult);
        }
      }
      pivots.push_back(col);
      ++rank;
    }
    // Back-substitution: clear entries above each pivot.
    for (std::size_t r = pivots.size(); r-- > 0;) {
      std::size_t col = pivots[r];
      for (std::size_t i = 0; i < r; ++i) {
        std::uint64_t v = M.row(i)[col];
        if (v) {
          std::uint64_t mult = p - v;
          M.axpy(i, r, mult);
          U.axpy(i, r, mult);
        }
      }
    }
  }
};

struct EchelonBit {
  std::size_t n, m;
  BitRows M, U;
  std::vector<std::size_t> pivots;

  EchelonBit(const SparseColumns& a) : n(a.cols.size()), m(a.rows), M(n, a.rows), U(n, n) {
    for (std::size_t j = 0; j < n; ++j) {
      for (auto [ri, v] : a.cols[j])
        if (v & 1) M.set(j, ri);
      U.set(j, j);
    }
    run();
  }

  void run() {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m && rank < n; ++col) {
      std::size_t piv = rank;
      while (piv < n && !M.get(piv, col)) ++piv;
      if (piv == n) continue;
      M.swap_rows(rank, piv);
      U.swap_rows(rank, piv);
      for (std::size_t i = rank + 1; i < n; ++i)
        if (M.get(i, col)) { M.xor_rows(i, rank); U.xor_rows(i, rank); }
      pivots.push_back(col);
      ++rank;
    }
    for (std::size_t r = pivots.size(); r-- > 0;) {
      std::size_t col = pivots[r];
      for (std::size_t i = 0; i < r; ++i)
        if (M.get(i, col)) { M.xor_rows(i, r); U.xor_rows(i, r); }
    }
  }
};

template <class Echelon, class GetM, class GetU>
LinSolveResult extract(const SparseColumns& a, const SparseVec* rhs, bool want_kernel,
                       const Echelon& ech, GetM get_m, GetU get_u) {
  const std::uint64_t p = a.p;
  LinSolveResult out;
  out.rank = ech.pivots.size();

  if (want_kernel) {
    for (std::size_t i = out.rank; i < ech.n; ++i) {
      std::vector<std::uint32_t> v(ech.n);
      for (std::size_t j = 0; j < ech.n; ++j) v[j] = get_u(i, j);
      out.kernel.push_back(std::move(v));
    }
  }

  if (rhs) {
    // Reduce rhs against the echelon rows; residual zero <=> solvable.
    std::vector<std::uint64_t> b(a.rows, 0);
    for (auto [ri, v] : *rhs) b[ri] = add_mod(b[ri], v, p);
    std::vector<std::uint64_t> coeff(out.rank, 0);
    for (std::size_t r = 0; r < out.rank; ++r) {
      std::uint64_t c = b[ech.pivots[r]] % p;
      coeff[r] = c;
      if (c == 0) continue;
      for (std::size_t k = 0; k < a.rows; ++k)
        b[k] = sub_mod(b[k], mul_mod(c, get_m(r, k), p), p);
    }
    std::size_t lead = a.rows;
    for (std::size_t k = 0; k < a.rows; ++k)
      if (b[k] % p) { lead = k; break; }
    if (lead == a.rows) {
      out.consistent = true;
      out.solution.assign(ech.n, 0);
      for (std::size_t r = 0; r < out.rank; ++r) {
        if (coeff[r] == 0) continue;
        for (std::size_t j = 0; j < ech.n; ++j)
          out.solution[j] = static_cast<std::uint32_t>(
              add_mod(out.solution[j], mul_mod(coeff[r], get_u(r, j), p), p));
      }
    } else {
      // w = e_lead - sum_r M[r][lead] * e_{pivot_r} annihilates the column
      // span (echelon rows are fully reduced at pivot positions) and pairs
      // nonzero with the residual, hence with rhs.
      out.consistent = false;
      out.functional.emplace_back(static_cast<std::uint32_t>(lead), 1);
      for (std::size_t r = 0; r < out.rank; ++r) {
        std::uint64_t v = get_m(r, lead);
        if (v) out.functional.emplace_back(static_cast<std::uint32_t>(ech.pivots[r]),
                                           static_cast<std::uint32_t>(p - v));
      }
      std::sort(out.functional.begin(), out.functional.end());
    }
  }
  return out;
}

}  // namespace

LinSolveResult solve_columns(const SparseColumns& a, const SparseVec* rhs, bool want_kernel) {
  if (a.p == 2) {
    EchelonBit ech(a);
    return extract(a, rhs, want_kernel, ech,
                   [&](std::size_t i, std::size_t k) -> std::uint64_t { return ech.M.get(i, k); },
                   [&](std::size_t i, std::size_t j) -> std::uint64_t { return ech.U.get(i, j); });
  }
  if (a.p >= (1ull << 31)) throw ExponentOverflow("modulus too large for dense solver");
  EchelonWord ech(a);
  return extract(a, rhs, want_kernel, ech,
                 [&](std::size_t i, std::size_t k) -> std::uint64_t { return ech.M.row(i)[k]; },
                 [&](std::size_t i, std::size_t j) -> std::uint64_t { return ech.U.row(i)[j]; });
}

std::size_t rank_columns(const SparseColumns& a) {
  const std::size_t n = a.cols.size();
  if (n == 0 || a.rows == 0) return 0;
  if (a.p == 2) {
    BitRows M(n, a.rows);
    for (std::size_t j = 0; j < n; ++j)
      for (auto [ri, v] : a.cols[j])
        if (v & 1) M.set(j, ri);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < a.rows && rank < n; ++col) {
      std::size_t piv = rank;
      while (piv < n && !M.get(piv, col)) ++piv;
      if (piv == n) continue;
      M.swap_rows(rank, piv);
      for (std::size_t i = rank + 1; i < n; ++i)
        if (M.get(i, col)) M.xor_rows(i, rank);
      ++rank;
    }
    return rank;
  }
  if (a.p >= (1ull << 31)) throw ExponentOverflow("modulus too large for dense solver");
  WordRows M(n, a.rows, a.p);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint32_t* r = M.row(j);
    for (auto [ri, v] : a.cols[j]) r[ri] = v;
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.rows && rank < n; ++col) {
    std::size_t piv = rank;
    while (piv < n && M.row(piv)[col] == 0) ++piv;
    if (piv == n) continue;
    M.swap_rows(rank, piv);
    std::uint64_t inv = inv_mod(M.row(rank)[col], a.p);
    if (inv != 1) M.scale_row(rank, inv);
    for (std::size_t i = rank + 1; i < n; ++i) {
      std::uint64_t v = M.row(i)[col];
      if (v) M.axpy(i, rank, a.p - v);
    }
    ++rank;
  }
  return rank;
}

}  // namespace ftc
