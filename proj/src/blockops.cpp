#include "blocktrace/blockops.hpp"

#include <string>

namespace blocktrace {

BlockMatrix::BlockMatrix(int m_, int n_, ComplexMatrix data_)
    : m(m_), n(n_), data(std::move(data_)) {
  if (m < 1 || n < 1) {
    throw DimensionError("BlockMatrix: block counts must be positive");
  }
  if (data.rows() != m * n || data.cols() != m * n) {
    throw DimensionError("BlockMatrix: data is " + std::to_string(data.rows()) + "x" +
                         std::to_string(data.cols()) + ", expected " +
                         std::to_string(m * n) + " square");
  }
}

BlockMatrix assemble(const std::vector<std::vector<ComplexMatrix>>& blocks) {
  const int m = static_cast<int>(blocks.size());
  if (m == 0) throw DimensionError("assemble: empty grid");
  const int n = blocks[0].empty() ? 0 : blocks[0][0].rows();
  if (n < 1) throw DimensionError("assemble: empty blocks");
  ComplexMatrix data(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(blocks[i].size()) != m) {
      throw DimensionError("assemble: grid is not square");
    }
    for (int j = 0; j < m; ++j) {
      const ComplexMatrix& blk = blocks[i][j];
      if (blk.rows() != n || blk.cols() != n) {
        throw DimensionError("assemble: block (" + std::to_string(i) + "," +
                             std::to_string(j) + ") is not " + std::to_string(n) +
                             "x" + std::to_string(n));
      }
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) data(i * n + r, j * n + c) = blk(r, c);
      }
    }
  }
  return BlockMatrix(m, n, std::move(data));
}

ComplexMatrix block_at(const BlockMatrix& a, int i, int j) {
  if (i < 0 || i >= a.m || j < 0 || j >= a.m) {
    throw DimensionError("block_at: block index (" + std::to_string(i) + "," +
                         std::to_string(j) + ") out of range for m=" +
                         std::to_string(a.m));
  }
  ComplexMatrix blk(a.n, a.n);
  for (int r = 0; r < a.n; ++r) {
    for (int c = 0; c < a.n; ++c) blk(r, c) = a.data(i * a.n + r, j * a.n + c);
  }
  return blk;
}

ComplexMatrix partial_trace_1(const BlockMatrix& a) {
  ComplexMatrix acc(a.n, a.n);
  for (int i = 0; i < a.m; ++i) {
    for (int r = 0; r < a.n; ++r) {
      for (int c = 0; c < a.n; ++c) acc(r, c) += a.data(i * a.n + r, i * a.n + c);
    }
  }
  return acc;
}

ComplexMatrix partial_trace_2(const BlockMatrix& a) {
  ComplexMatrix out(a.m, a.m);
  for (int i = 0; i < a.m; ++i) {
    for (int j = 0; j < a.m; ++j) {
      Complex t{};
      for (int r = 0; r < a.n; ++r) t += a.data(i * a.n + r, j * a.n + r);
      out(i, j) = t;
    }
  }
  return out;
}

BlockMatrix partial_transpose(const BlockMatrix& a) {
  ComplexMatrix out(a.m * a.n, a.m * a.n);
  for (int i = 0; i < a.m; ++i) {
    for (int j = 0; j < a.m; ++j) {
      for (int r = 0; r < a.n; ++r) {
        for (int c = 0; c < a.n; ++c) {
          out(i * a.n + r, j * a.n + c) = a.data(j * a.n + r, i * a.n + c);
        }
      }
    }
  }
  return BlockMatrix(a.m, a.n, std::move(out));
}

BlockMatrix embed_left(const ComplexMatrix& x, int m) {
  if (!x.square()) throw DimensionError("embed_left: x must be square");
  if (m < 1) throw DimensionError("embed_left: m must be positive");
  return BlockMatrix(m, x.rows(), kron(ComplexMatrix::identity(m), x));
}

BlockMatrix embed_right(const ComplexMatrix& y, int n) {
  if (!y.square()) throw DimensionError("embed_right: y must be square");
  if (n < 1) throw DimensionError("embed_right: n must be positive");
  return BlockMatrix(y.rows(), n, kron(y, ComplexMatrix::identity(n)));
}

}  // namespace blocktrace
