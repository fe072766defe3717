#include "trgsvd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trgsvd/error.hpp"

namespace trgsvd {

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row >= nrows || t.col >= ncols)
            throw DimensionError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                 ") outside " + std::to_string(nrows) + "x" + std::to_string(ncols));
        if (!std::isfinite(t.value)) throw InvalidArgument("non-finite matrix entry");
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.nrows_ = nrows;
    m.ncols_ = ncols;
    m.row_offsets_.assign(nrows + 1, 0);
    m.col_indices_.reserve(entries.size());
    m.values_.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& t = entries[i];
        if (i > 0 && entries[i - 1].row == t.row && entries[i - 1].col == t.col) {
            m.values_.back() += t.value;
            continue;
        }
        m.col_indices_.push_back(t.col);
        m.values_.push_back(t.value);
        ++m.row_offsets_[t.row + 1];
    }
    for (std::size_t r = 0; r < nrows; ++r) m.row_offsets_[r + 1] += m.row_offsets_[r];
    return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
                                    std::vector<std::size_t> col_indices, std::vector<double> values) {
    if (row_offsets.size() != nrows + 1) throw DimensionError("row_offsets must have nrows+1 entries");
    if (row_offsets.front() != 0) throw InvalidArgument("row_offsets must start at 0");
    if (row_offsets.back() != values.size() || col_indices.size() != values.size())
        throw DimensionError("CSR arrays disagree on the number of stored entries");
    for (std::size_t r = 0; r < nrows; ++r) {
        if (row_offsets[r + 1] < row_offsets[r]) throw InvalidArgument("row_offsets must be non-decreasing");
        for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
            if (col_indices[k] >= ncols) throw DimensionError("column index out of range");
            if (k > row_offsets[r] && col_indices[k] <= col_indices[k - 1])
                throw InvalidArgument("column indices must be strictly increasing within a row");
            if (!std::isfinite(values[k])) throw InvalidArgument("non-finite matrix entry");
        }
    }
    SparseMatrix m;
    m.nrows_ = nrows;
    m.ncols_ = ncols;
    m.row_offsets_ = std::move(row_offsets);
    m.col_indices_ = std::move(col_indices);
    m.values_ = std::move(values);
    return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& d) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (d(i, j) != 0.0) t.push_back({i, j, d(i, j)});
    return from_triplets(d.rows(), d.cols(), std::move(t));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    Vector ones(n, 1.0);
    return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
    std::vector<Triplet> t;
    t.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
    return from_triplets(d.size(), d.size(), std::move(t));
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(nrows_, ncols_);
    for (std::size_t r = 0; r < nrows_; ++r)
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) d(r, col_indices_[k]) = values_[k];
    return d;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t;
    t.nrows_ = ncols_;
    t.ncols_ = nrows_;
    t.row_offsets_.assign(ncols_ + 1, 0);
    for (std::size_t c : col_indices_) ++t.row_offsets_[c + 1];
    for (std::size_t c = 0; c < ncols_; ++c) t.row_offsets_[c + 1] += t.row_offsets_[c];
    t.col_indices_.resize(nnz());
    t.values_.resize(nnz());
    std::vector<std::size_t> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
    for (std::size_t r = 0; r < nrows_; ++r)
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            const std::size_t dst = next[col_indices_[k]]++;
            t.col_indices_[dst] = r;
            t.values_[dst] = values_[k];
        }
    return t;
}

SparseMatrix SparseMatrix::scaled(double factor) const {
    SparseMatrix s = *this;
    for (double& v : s.values_) v *= factor;
    return s;
}

Vector spmv(const SparseMatrix& m, std::span<const double> x) {
    if (x.size() != m.ncols())
        throw DimensionError("spmv: vector length " + std::to_string(x.size()) + " != ncols " +
                             std::to_string(m.ncols()));
    const auto ro = m.row_offsets();
    const auto ci = m.col_indices();
    const auto v = m.values();
    Vector y(m.nrows(), 0.0);
    for (std::size_t r = 0; r < m.nrows(); ++r) {
        double s = 0.0;
        for (std::size_t k = ro[r]; k < ro[r + 1]; ++k) s += v[k] * x[ci[k]];
        y[r] = s;
    }
    return y;
}

Vector spmv_transpose(const SparseMatrix& m, std::span<const double> y) {
    if (y.size() != m.nrows())
        throw DimensionError("spmv_transpose: vector length " + std::to_string(y.size()) + " != nrows " +
                             std::to_string(m.nrows()));
    const auto ro = m.row_offsets();
    const auto ci = m.col_indices();
    const auto v = m.values();
    // Scatter by increasing row: each output sums in the same order as a
    // row of the explicit transpose.
    Vector x(m.ncols(), 0.0);
    for (std::size_t r = 0; r < m.nrows(); ++r) {
        const double yr = y[r];
        for (std::size_t k = ro[r]; k < ro[r + 1]; ++k) x[ci[k]] += v[k] * yr;
    }
    return x;
}

double inf_norm(const SparseMatrix& m) {
    const auto ro = m.row_offsets();
    const auto v = m.values();
    double best = 0.0;
    for (std::size_t r = 0; r < m.nrows(); ++r) {
        double s = 0.0;
        for (std::size_t k = ro[r]; k < ro[r + 1]; ++k) s += std::abs(v[k]);
        best = std::max(best, s);
    }
    return best;
}

}  // namespace trgsvd
