#include "trgsvd/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "trgsvd/error.hpp"

namespace trgsvd {

namespace {

enum class Symmetry { general, symmetric, skew };

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

// Next line that is neither blank nor a comment; false at end of input.
bool next_data_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line) || line[0] == '%') continue;
        return true;
    }
    return false;
}

[[noreturn]] void fail(std::size_t lineno, const std::string& what) {
    std::ostringstream os;
    os << "MatrixMarket line " << lineno << ": " << what;
    throw ParseError(os.str());
}

double parse_value(std::istringstream& ls, std::size_t lineno) {
    std::string tok;
    if (!(ls >> tok)) fail(lineno, "missing value");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        fail(lineno, "malformed value '" + tok + "'");
    }
    if (used != tok.size()) fail(lineno, "malformed value '" + tok + "'");
    if (!std::isfinite(v)) fail(lineno, "non-finite value");
    return v;
}

void expect_end(std::istringstream& ls, std::size_t lineno) {
    std::string extra;
    if (ls >> extra) fail(lineno, "unexpected trailing token '" + extra + "'");
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("MatrixMarket: empty input");
    ++lineno;
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") fail(lineno, "missing %%MatrixMarket banner");
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix") fail(lineno, "unsupported object '" + object + "'");
    if (format != "coordinate" && format != "array") fail(lineno, "unsupported format '" + format + "'");
    if (field == "complex") fail(lineno, "complex matrices are not supported");
    if (field == "pattern") fail(lineno, "pattern matrices are not supported (no values)");
    if (field != "real" && field != "integer" && field != "double")
        fail(lineno, "unsupported field '" + field + "'");
    Symmetry sym;
    if (symmetry == "general") {
        sym = Symmetry::general;
    } else if (symmetry == "symmetric") {
        sym = Symmetry::symmetric;
    } else if (symmetry == "skew-symmetric") {
        sym = Symmetry::skew;
    } else {
        fail(lineno, "unsupported symmetry '" + symmetry + "'");
    }

    if (!next_data_line(in, line, lineno)) fail(lineno, "missing size line");
    std::istringstream ss(line);
    long long rows = -1, cols = -1, nnz = -1;
    const bool coordinate = format == "coordinate";
    if (!(ss >> rows >> cols)) fail(lineno, "malformed size line");
    if (coordinate && !(ss >> nnz)) fail(lineno, "coordinate size line needs an entry count");
    expect_end(ss, lineno);
    if (rows < 0 || cols < 0 || (coordinate && nnz < 0)) fail(lineno, "negative dimension");
    if (sym != Symmetry::general && rows != cols) fail(lineno, "symmetric storage requires a square matrix");

    const auto nr = static_cast<std::size_t>(rows);
    const auto nc = static_cast<std::size_t>(cols);
    std::vector<Triplet> t;
    auto add = [&](std::size_t i, std::size_t j, double v) {
        t.push_back({i, j, v});
        if (i != j && sym == Symmetry::symmetric) t.push_back({j, i, v});
        if (i != j && sym == Symmetry::skew) t.push_back({j, i, -v});
    };

    if (coordinate) {
        for (long long e = 0; e < nnz; ++e) {
            if (!next_data_line(in, line, lineno)) fail(lineno, "fewer entries than declared");
            std::istringstream ls(line);
            long long i = 0, j = 0;
            if (!(ls >> i >> j)) fail(lineno, "malformed entry indices");
            if (i < 1 || j < 1 || i > rows || j > cols) fail(lineno, "index out of bounds");
            const double v = parse_value(ls, lineno);
            expect_end(ls, lineno);
            if (sym == Symmetry::skew && i == j) fail(lineno, "skew-symmetric matrix with a diagonal entry");
            add(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v);
        }
    } else {
        for (std::size_t j = 0; j < nc; ++j) {
            const std::size_t first = sym == Symmetry::general ? 0 : (sym == Symmetry::symmetric ? j : j + 1);
            for (std::size_t i = first; i < nr; ++i) {
                if (!next_data_line(in, line, lineno)) fail(lineno, "fewer values than the array size");
                std::istringstream ls(line);
                const double v = parse_value(ls, lineno);
                expect_end(ls, lineno);
                if (v != 0.0) add(i, j, v);
            }
        }
    }
    if (next_data_line(in, line, lineno)) fail(lineno, "more entries than declared");
    return SparseMatrix::from_triplets(nr, nc, t);
}

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open MatrixMarket file '" + path + "'");
    try {
        return read_matrix_market(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.nrows() << ' ' << m.ncols() << ' ' << m.values().size() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < m.nrows(); ++i)
        for (std::size_t k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", m.values()[k]);
            out << i + 1 << ' ' << m.col_indices()[k] + 1 << ' ' << buf << '\n';
        }
}

void write_matrix_market(const std::string& path, const SparseMatrix& m) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write MatrixMarket file '" + path + "'");
    write_matrix_market(out, m);
    if (!out) throw ParseError("error while writing '" + path + "'");
}

}  // namespace trgsvd
