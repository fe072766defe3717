#include "trgsvd/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "trgsvd/equivalents.hpp"
#include "trgsvd/error.hpp"
#include "trgsvd/gsvd_solver.hpp"
#include "trgsvd/matrix_market.hpp"
#include "trgsvd/problems.hpp"
#include "trgsvd/report.hpp"

namespace trgsvd {

namespace {

struct ProblemSpec {
    std::string kind;
    std::map<std::string, std::string> params;
};

ProblemSpec parse_problem(const std::string& text) {
    ProblemSpec spec;
    const auto colon = text.find(':');
    spec.kind = text.substr(0, colon);
    if (colon == std::string::npos) return spec;
    std::istringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidArgument("problem parameter '" + item + "' is not key=value");
        spec.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return spec;
}

std::size_t take_count(ProblemSpec& spec, const std::string& key, std::optional<std::size_t> fallback = {}) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) {
        if (fallback) return *fallback;
        throw InvalidArgument("problem '" + spec.kind + "' needs " + key + "=");
    }
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(it->second, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != it->second.size()) throw InvalidArgument("bad value for " + key + ": " + it->second);
    spec.params.erase(it);
    return static_cast<std::size_t>(v);
}

double take_real(ProblemSpec& spec, const std::string& key, double fallback) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != it->second.size()) throw InvalidArgument("bad value for " + key + ": " + it->second);
    spec.params.erase(it);
    return v;
}

MatrixPair build_problem(const std::string& text, std::uint64_t seed) {
    ProblemSpec spec = parse_problem(text);
    MatrixPair pair;
    if (spec.kind == "diagonal") {
        const std::size_t n = take_count(spec, "n");
        const std::size_t s = take_count(spec, "seed", static_cast<std::size_t>(seed));
        pair = gen_diagonal_problem(n, s);
    } else if (spec.kind == "random") {
        const std::size_t m = take_count(spec, "m");
        const std::size_t p = take_count(spec, "p");
        const std::size_t n = take_count(spec, "n");
        const double density = take_real(spec, "density", 0.3);
        const std::size_t s = take_count(spec, "seed", static_cast<std::size_t>(seed));
        pair = gen_random_pair(m, p, n, s, density);
    } else {
        throw InvalidArgument("unknown problem kind '" + spec.kind + "' (expected diagonal or random)");
    }
    if (!spec.params.empty())
        throw InvalidArgument("unknown problem parameter '" + spec.params.begin()->first + "'");
    return pair;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Partial generalized singular value decomposition of a sparse matrix pair"};
    app.name("gsvd");

    std::string solver = "trlanczos";
    std::string which = "largest";
    std::string ls_method = "lsqr";
    std::string output = "text";
    std::string problem;
    std::string a_path;
    std::string b_path;
    std::string report_path;
    bool b_regularizer = false;
    bool no_locking = false;
    bool no_timing = false;
    GsvdOptions opts;

    app.add_option("--solver", solver, "trlanczos, cross, cyclic-a or cyclic-b")
        ->check(CLI::IsMember({"trlanczos", "cross", "cyclic-a", "cyclic-b"}))
        ->capture_default_str();
    app.add_option("--nsv", opts.nsv, "number of requested values")->capture_default_str();
    app.add_option("--ncv", opts.ncv, "basis size, 0 for max(2 nsv, 10)")->capture_default_str();
    app.add_option("--which", which, "largest or smallest")
        ->check(CLI::IsMember({"largest", "smallest"}))
        ->capture_default_str();
    app.add_option("--tol", opts.tol, "convergence tolerance")->capture_default_str();
    app.add_option("--max-restarts", opts.max_restarts, "restart limit")->capture_default_str();
    app.add_option("--keep", opts.keep, "fraction of the basis kept at restart")->capture_default_str();
    app.add_option("--gamma", opts.gamma, "scale factor applied to B")->capture_default_str();
    app.add_flag("--one-sided", opts.one_sided, "orthogonalize only the U basis explicitly");
    app.add_flag("--no-locking", no_locking, "keep converged vectors active");
    app.add_option("--ls", ls_method, "least-squares method: lsqr or qr")
        ->check(CLI::IsMember({"lsqr", "qr"}))
        ->capture_default_str();
    app.add_option("--lsqr-tol", opts.ls.lsqr_tol, "LSQR stopping tolerance")->capture_default_str();
    app.add_option("--lsqr-maxit", opts.ls.lsqr_maxit, "LSQR iteration cap, 0 for 10 (m+p)")->capture_default_str();
    app.add_option("--seed", opts.seed, "seed for start vectors and generated problems")->capture_default_str();
    app.add_option("--output", output, "json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--report", report_path, "write the report to this file instead of stdout");
    app.add_flag("--no-timing", no_timing, "report wall time as 0 so reports are reproducible byte for byte");
    auto* prob = app.add_option("--problem", problem, "diagonal:n=N[,seed=S] or random:m=M,p=P,n=N[,density=D,seed=S]");
    auto* aopt = app.add_option("--a", a_path, "MatrixMarket file for A");
    auto* bopt = app.add_option("--b", b_path, "MatrixMarket file for B");
    auto* regopt = app.add_flag("--b-regularizer", b_regularizer, "use the (n+1) x n bidiagonal regularizer as B");
    prob->excludes(aopt)->excludes(bopt)->excludes(regopt);
    bopt->excludes(regopt);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (problem.empty() && a_path.empty()) {
        err << "gsvd: one of --problem or --a is required\n";
        return kExitUsage;
    }
    if (!a_path.empty() && b_path.empty() && !b_regularizer) {
        err << "gsvd: --a needs --b or --b-regularizer\n";
        return kExitUsage;
    }
    opts.which = which == "largest" ? Which::largest : Which::smallest;
    opts.locking = !no_locking;
    opts.ls.method = ls_method == "qr" ? LsMethod::dense_qr : LsMethod::lsqr;
    const ReportFormat format =
        output == "json" ? ReportFormat::json : (output == "csv" ? ReportFormat::csv : ReportFormat::text);

    try {
        MatrixPair pair;
        if (!problem.empty()) {
            pair = build_problem(problem, opts.seed);
        } else {
            pair.a = read_matrix_market(a_path);
            pair.b = b_regularizer ? gen_bidiagonal_regularizer(pair.a.ncols()) : read_matrix_market(b_path);
        }

        Report report;
        report.solver = solver;
        report.which = which;
        report.nsv = opts.nsv;
        bool converged = true;
        if (solver == "trlanczos") {
            GsvdResult r = gsvd_solve(pair.a, pair.b, opts);
            converged = r.all_converged() && r.values.size() == opts.nsv;
            report.values = std::move(r.values);
            report.stats = r.stats;
        } else if (solver == "cross") {
            report.values = gsvd_cross(pair.a, pair.b, opts.nsv, opts.which);
        } else {
            const auto variant = solver == "cyclic-a" ? CyclicVariant::a_side : CyclicVariant::b_side;
            report.values = gsvd_cyclic(pair.a, pair.b, opts.nsv, opts.which, variant);
        }
        if (solver != "trlanczos") report.stats.nconv = report.values.size();
        if (no_timing) report.stats.wall_time_s = 0.0;

        if (report_path.empty()) {
            write_report(out, report, format);
        } else {
            std::ofstream f(report_path);
            if (!f) throw ParseError("cannot write report file '" + report_path + "'");
            write_report(f, report, format);
        }
        if (!converged) {
            err << "gsvd: not all requested values converged\n";
            return kExitNotConverged;
        }
        return kExitOk;
    } catch (const NotRegularError& e) {
        err << "gsvd: " << e.what() << '\n';
        return kExitNotRegular;
    } catch (const SemiDefiniteError& e) {
        err << "gsvd: " << e.what() << '\n';
        return kExitNotRegular;
    } catch (const NonConvergenceError& e) {
        err << "gsvd: " << e.what() << '\n';
        return kExitNotConverged;
    } catch (const ParseError& e) {
        err << "gsvd: " << e.what() << '\n';
        return kExitIo;
    } catch (const InvalidArgument& e) {
        err << "gsvd: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "gsvd: " << e.what() << '\n';
        return kExitError;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace trgsvd
