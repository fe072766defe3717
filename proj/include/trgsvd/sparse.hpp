#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trgsvd/dense.hpp"

namespace trgsvd {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
///
/// Instances are immutable once built. The only way to construct one is
/// through from_triplets() / from_csr() / from_dense(), all of which
/// validate and canonicalize the storage.
class SparseMatrix {
public:
    SparseMatrix() : row_offsets_(1, 0) {}

    /// Duplicates are summed; entries are sorted by (row, col). Explicit
    /// zeros are kept so that structure read from files round-trips.
    static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols, std::vector<Triplet> entries);
    /// Takes raw CSR arrays and checks every storage invariant.
    static SparseMatrix from_csr(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
                                 std::vector<std::size_t> col_indices, std::vector<double> values);
    /// Stores every nonzero of a dense matrix.
    static SparseMatrix from_dense(const DenseMatrix& d);
    static SparseMatrix identity(std::size_t n);
    static SparseMatrix diagonal(std::span<const double> d);

    std::size_t nrows() const { return nrows_; }
    std::size_t ncols() const { return ncols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const std::size_t> row_offsets() const { return row_offsets_; }
    std::span<const std::size_t> col_indices() const { return col_indices_; }
    std::span<const double> values() const { return values_; }

    DenseMatrix to_dense() const;
    SparseMatrix transpose() const;
    SparseMatrix scaled(double factor) const;

private:
    std::size_t nrows_ = 0;
    std::size_t ncols_ = 0;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

/// y = m x, summed left to right within each row.
Vector spmv(const SparseMatrix& m, std::span<const double> x);
/// x = m^T y, equal to spmv on the explicit transpose.
Vector spmv_transpose(const SparseMatrix& m, std::span<const double> y);
/// Largest absolute row sum; 0 for an empty matrix.
double inf_norm(const SparseMatrix& m);

}  // namespace trgsvd
