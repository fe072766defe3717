#pragma once

#include <iosfwd>
#include <string>

#include "trgsvd/sparse.hpp"

namespace trgsvd {

/// Reads a real or integer MatrixMarket file in coordinate or array format
/// with general, symmetric or skew-symmetric storage. Throws ParseError.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::string& path);

/// Writes "coordinate real general" with 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market(const std::string& path, const SparseMatrix& m);

}  // namespace trgsvd
