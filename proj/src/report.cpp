#include "trgsvd/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace trgsvd {

namespace {

std::string num(double x) {
    if (std::isinf(x)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_json(std::ostream& out, const Report& r) {
    nlohmann::ordered_json j;
    j["solver"] = r.solver;
    j["which"] = r.which;
    j["nsv"] = r.nsv;
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (const auto& q : r.values) {
        nlohmann::ordered_json v;
        if (q.infinite) {
            v["sigma"] = nullptr;
        } else {
            v["sigma"] = q.sigma;
        }
        v["c"] = q.c;
        v["s"] = q.s;
        v["residual_estimate"] = q.residual_estimate;
        v["relative_residual"] = q.relative_residual;
        v["converged"] = q.converged;
        values.push_back(std::move(v));
    }
    j["values"] = std::move(values);
    j["stats"] = {{"restarts", r.stats.restarts},
                  {"steps", r.stats.steps},
                  {"ls_solves", r.stats.ls_solves},
                  {"ls_iterations", r.stats.ls_iterations},
                  {"nconv", r.stats.nconv},
                  {"orth_inner_products", r.stats.ortho.inner_products},
                  {"wall_time_s", r.stats.wall_time_s}};
    out << j.dump(2) << '\n';
}

void write_csv(std::ostream& out, const Report& r) {
    out << "index,sigma,c,s,residual_estimate,relative_residual,converged,restarts,ls_iterations\n";
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const auto& q = r.values[i];
        out << i << ',' << num(q.sigma) << ',' << num(q.c) << ',' << num(q.s) << ',' << num(q.residual_estimate)
            << ',' << num(q.relative_residual) << ',' << (q.converged ? 1 : 0) << ',' << r.stats.restarts << ','
            << r.stats.ls_iterations << '\n';
    }
}

void write_text(std::ostream& out, const Report& r) {
    char buf[256];
    out << "solver " << r.solver << ", " << r.which << ", nsv " << r.nsv << '\n';
    std::snprintf(buf, sizeof buf, "%4s  %-22s %-12s %-12s %-10s %-10s %s\n", "i", "sigma", "c", "s", "estimate",
                  "rel.res", "conv");
    out << buf;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const auto& q = r.values[i];
        if (q.infinite) {
            std::snprintf(buf, sizeof buf, "%4zu  %-22s ", i, "inf");
        } else {
            std::snprintf(buf, sizeof buf, "%4zu  %-22.15g ", i, q.sigma);
        }
        out << buf;
        std::snprintf(buf, sizeof buf, "%-12.8f %-12.8f %-10.2e %-10.2e %s\n", q.c, q.s, q.residual_estimate,
                      q.relative_residual, q.converged ? "yes" : "no");
        out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "restarts %zu, steps %zu, ls solves %zu, ls iterations %zu, converged %zu, time %.3f s\n",
                  r.stats.restarts, r.stats.steps, r.stats.ls_solves, r.stats.ls_iterations, r.stats.nconv,
                  r.stats.wall_time_s);
    out << buf;
}

}  // namespace

void write_report(std::ostream& out, const Report& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: write_json(out, report); break;
        case ReportFormat::csv: write_csv(out, report); break;
        case ReportFormat::text: write_text(out, report); break;
    }
}

std::string format_report(const Report& report, ReportFormat format) {
    std::ostringstream os;
    write_report(os, report, format);
    return os.str();
}

}  // namespace trgsvd
