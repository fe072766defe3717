#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trgsvd/gsvd_solver.hpp"

namespace trgsvd {

enum class ReportFormat { json, csv, text };

struct Report {
    std::string solver;
    std::string which;
    std::size_t nsv = 0;
    std::vector<GsvdQuadruple> values;
    GsvdStats stats;
};

/// JSON schema:
///   {"solver", "which", "nsv",
///    "values": [{"sigma", "c", "s", "residual_estimate", "relative_residual", "converged"}],
///    "stats": {"restarts", "steps", "ls_solves", "ls_iterations", "nconv", "orth_inner_products", "wall_time_s"}}
/// An infinite sigma is written as null.
void write_report(std::ostream& out, const Report& report, ReportFormat format);
std::string format_report(const Report& report, ReportFormat format);

}  // namespace trgsvd
