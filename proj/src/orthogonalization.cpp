#include "trgsvd/orthogonalization.hpp"

#include <cassert>

#include "trgsvd/error.hpp"

namespace trgsvd {

namespace {

// One classical Gram-Schmidt pass: h = B^T v, v -= B h.
void cgs_pass(std::span<double> v, const DenseMatrix& basis, std::size_t ncols, std::span<double> h,
              OrthoCounter* counter) {
    for (std::size_t j = 0; j < ncols; ++j) h[j] = dot(basis.col(j), v);
    for (std::size_t j = 0; j < ncols; ++j) axpy(-h[j], basis.col(j), v);
    if (counter) {
        counter->inner_products += ncols;
        counter->flops += ncols * v.size();
    }
}

}  // namespace

OrthoResult orthogonalize(std::span<double> v, const DenseMatrix& basis, std::size_t ncols,
                          OrthoCounter* counter, double breakdown_tol) {
    if (ncols > basis.cols()) throw DimensionError("orthogonalize: ncols exceeds basis width");
    if (ncols > 0 && v.size() != basis.rows()) throw DimensionError("orthogonalize: vector length mismatch");

    OrthoResult r;
    r.coeffs.assign(ncols, 0.0);
    r.norm_in = norm2(v);
    if (counter) ++counter->calls;
    if (ncols == 0) {
        r.norm_out = r.norm_in;
        r.breakdown = r.norm_in == 0.0;
        return r;
    }

    Vector h(ncols);
    double before = r.norm_in;
    for (int pass = 0; pass < 2; ++pass) {
        cgs_pass(v, basis, ncols, h, counter);
        for (std::size_t j = 0; j < ncols; ++j) r.coeffs[j] += h[j];
        ++r.passes;
        const double after = norm2(v);
        r.norm_out = after;
        if (after >= kReorthEta * before) break;
        if (pass == 0 && counter) ++counter->second_passes;
        before = after;
    }
    r.breakdown = r.norm_out <= breakdown_tol * r.norm_in || r.norm_in == 0.0;
    return r;
}

NormalizeResult normalize(std::span<double> v, double breakdown_tol) {
    NormalizeResult r;
    r.norm = norm2(v);
    if (r.norm <= breakdown_tol) {
        r.breakdown = true;
        return r;
    }
    scale(1.0 / r.norm, v);
    return r;
}

std::optional<Vector> random_orthogonal_vector(std::size_t length, const DenseMatrix& basis, std::size_t ncols,
                                               SplitMix64& rng, OrthoCounter* counter) {
    if (ncols >= length) return std::nullopt;
    for (int attempt = 0; attempt < 3; ++attempt) {
        Vector v(length);
        rng.fill_uniform(v);
        const OrthoResult o = orthogonalize(v, basis, ncols, counter);
        if (o.breakdown || o.norm_out < 1e-8 * o.norm_in) continue;
        scale(1.0 / o.norm_out, v);
        return v;
    }
    return std::nullopt;
}

}  // namespace trgsvd
