#pragma once

#include <vector>

#include "blocktrace/matkernel.hpp"

namespace blocktrace {

// An mn x mn matrix tagged with its block structure: m x m blocks, each
// n x n. Block (i,j) is the submatrix at rows [i*n, (i+1)*n), cols
// [j*n, (j+1)*n). The tag is metadata over flat storage, so every dense
// kernel operation applies to `data` directly.
struct BlockMatrix {
  BlockMatrix(int m_, int n_, ComplexMatrix data_);

  int m = 0;  // outer block count
  int n = 0;  // inner block size
  ComplexMatrix data;
};

// Lays out an m x m grid of n x n blocks into one BlockMatrix.
BlockMatrix assemble(const std::vector<std::vector<ComplexMatrix>>& blocks);

// Copy of block (i,j).
ComplexMatrix block_at(const BlockMatrix& a, int i, int j);

// Sum of the diagonal blocks; n x n.
ComplexMatrix partial_trace_1(const BlockMatrix& a);

// Matrix of block traces; m x m.
ComplexMatrix partial_trace_2(const BlockMatrix& a);

// Swaps block positions (i,j) <-> (j,i) without transposing the blocks
// themselves. An involution.
BlockMatrix partial_transpose(const BlockMatrix& a);

// kron(I_m, x), tagged (m, n) with n = x.rows().
BlockMatrix embed_left(const ComplexMatrix& x, int m);

// kron(y, I_n), tagged (m, n) with m = y.rows().
BlockMatrix embed_right(const ComplexMatrix& y, int n);

}  // namespace blocktrace
