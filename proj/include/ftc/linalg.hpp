#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ftc/errors.hpp"

namespace ftc {

// Dense Gaussian elimination over GF(p). Storage is one 32-bit word per
// entry (p < 2^31) with Barrett reduction, or packed bit rows when p = 2.

using SparseEntry = std::pair<std::uint32_t, std::uint32_t>;  // (row index, value mod p)
using SparseVec = std::vector<SparseEntry>;

/// Column-major sparse input: the matrix whose j-th column is cols[j].
struct SparseColumns {
  std::size_t rows = 0;
  std::uint64_t p = 2;
  std::vector<SparseVec> cols;
};

struct LinSolveResult {
  std::size_t rank = 0;
  bool consistent = false;
  // Coefficients over the columns (size cols.size()) when consistent.
  std::vector<std::uint32_t> solution;
  // Sparse functional w over the rows with w*A = 0, w*rhs != 0, when not.
  SparseVec functional;
  // Kernel basis (vectors over the columns) when requested.
  std::vector<std::vector<std::uint32_t>> kernel;
};

/// Solve A*x = rhs (rhs may be null: rank/kernel only) and optionally
/// compute a kernel basis of A. Works for any p >= 2.
LinSolveResult solve_columns(const SparseColumns& a, const SparseVec* rhs, bool want_kernel);

/// Rank of the column span; forward elimination only.
std::size_t rank_columns(const SparseColumns& a);

}  // namespace ftc
