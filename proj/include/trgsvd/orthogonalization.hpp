#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "trgsvd/dense.hpp"
#include "trgsvd/random.hpp"

namespace trgsvd {

/// Second Gram-Schmidt pass is triggered when a pass shrinks the vector
/// below this fraction of its incoming norm.
inline constexpr double kReorthEta = 0.70710678118654752440;
inline constexpr double kBreakdownTol = 1e-14;

/// Work counter for orthogonalization. `inner_products` counts vector dot
/// products; `flops` weights each by the vector length.
struct OrthoCounter {
    std::size_t inner_products = 0;
    std::size_t flops = 0;
    std::size_t calls = 0;
    std::size_t second_passes = 0;
};

struct OrthoResult {
    Vector coeffs;          // accumulated projection coefficients, one per basis column
    double norm_in = 0.0;   // ||v|| on entry
    double norm_out = 0.0;  // ||v_orth||
    int passes = 0;
    bool breakdown = false;  // v was (numerically) in the span of the basis
};

/// Iterated classical Gram-Schmidt (at most two passes) of v against the
/// leading `ncols` columns of `basis`, in place. Breakdown is reported when
/// norm_out < breakdown_tol * norm_in.
OrthoResult orthogonalize(std::span<double> v, const DenseMatrix& basis, std::size_t ncols,
                          OrthoCounter* counter = nullptr, double breakdown_tol = kBreakdownTol);

struct NormalizeResult {
    double norm = 0.0;
    bool breakdown = false;
};

/// Scales v to unit length. `breakdown_tol` is an absolute threshold on the
/// norm; below it v is left untouched and breakdown is flagged.
NormalizeResult normalize(std::span<double> v, double breakdown_tol = kBreakdownTol);

/// A unit vector orthogonal to the leading ncols columns of basis, drawn
/// from rng. Empty when the orthogonal complement is (numerically) empty.
std::optional<Vector> random_orthogonal_vector(std::size_t length, const DenseMatrix& basis, std::size_t ncols,
                                               SplitMix64& rng, OrthoCounter* counter = nullptr);

}  // namespace trgsvd
