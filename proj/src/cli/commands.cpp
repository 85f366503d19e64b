#include "src/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "src/cli/csv.hpp"
#include "src/cli/manifest.hpp"
#include "src/mc/binomial_tree.hpp"
#include "src/problem/contraction.hpp"
#include "src/problem/spec_file.hpp"
#include "src/solver/picard.hpp"
#include "src/support/format.hpp"

namespace fbsdde {

namespace {

struct Options {
    std::string spec;
    std::size_t steps = 16;
    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    double beta = 0.0;
    bool beta_set = false;
    std::size_t max_picard = 50;
    double tol = 1e-4;
    std::size_t degree = 2;
    std::string out = "out";
    std::size_t workers = 1;
    std::string timestamp;
    std::vector<std::size_t> steps_list{4, 8};
    std::vector<std::size_t> paths_list{1000, 10000};
    bool oracle = false;
    std::size_t oracle_cap = kDefaultTreeCap;
};

void add_shared(CLI::App* cmd, Options& o, bool solver_flags) {
    cmd->add_option("spec", o.spec, "problem specification file")->required();
    cmd->add_option("--out", o.out, "output directory")->capture_default_str();
    cmd->add_option("--workers", o.workers, "worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--timestamp", o.timestamp, "timestamp recorded in the manifest (default: now, UTC)");
    if (!solver_flags) return;
    cmd->add_option("--steps", o.steps, "time steps N")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--paths", o.paths, "Monte Carlo scenarios M")->check(CLI::Range(2ul, 100000000ul))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Brownian seed")->capture_default_str();
    cmd->add_option("--beta", o.beta, "norm weight exponent (default 1/T)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-picard", o.max_picard, "Picard iteration cap")->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--tol", o.tol, "tolerance on D_n")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--basis-degree", o.degree, "regression polynomial degree")->check(CLI::Range(0ul, 6ul))
        ->capture_default_str();
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s;
}

std::vector<std::pair<std::string, std::string>> solver_settings(const Options& o, bool with_grid) {
    std::vector<std::pair<std::string, std::string>> s;
    if (with_grid) {
        s.emplace_back("steps", std::to_string(o.steps));
        s.emplace_back("paths", std::to_string(o.paths));
    }
    s.emplace_back("seed", std::to_string(o.seed));
    if (o.beta_set) s.emplace_back("beta", format_number(o.beta));
    s.emplace_back("max-picard", std::to_string(o.max_picard));
    s.emplace_back("tol", format_number(o.tol));
    s.emplace_back("basis-degree", std::to_string(o.degree));
    return s;
}

RunManifest make_manifest(const std::string& sub, const Options& o,
                          std::vector<std::pair<std::string, std::string>> settings) {
    RunManifest m;
    m.subcommand = sub;
    m.spec_path = o.spec;
    m.settings = std::move(settings);
    m.output_dir = o.out;
    m.timestamp = o.timestamp.empty() ? utc_timestamp_now() : o.timestamp;
    m.seed = o.seed;
    return m;
}

SolverConfig make_config(const ProblemSpec& spec, const Options& o, std::size_t steps, std::size_t paths) {
    SolverConfig cfg;
    cfg.grid = TimeGrid(spec.horizon, steps);
    cfg.scenarios = paths;
    cfg.basis.max_degree = o.degree;
    if (o.beta_set) cfg.beta = o.beta;
    cfg.max_picard = o.max_picard;
    cfg.picard_tol = o.tol;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    return cfg;
}

std::string certificate_line(const ContractionCertificate& c) {
    return "mode=" + std::string(to_string(c.mode)) + " K_effective=" + format_number(c.K_effective) +
           " rho=" + format_number(c.rho) + (c.satisfied ? " SATISFIED" : " NOT SATISFIED");
}

CsvRow certificate_row(const std::string& which, const ContractionCertificate& c) {
    return {which, std::string(to_string(c.mode)), csv_cell(c.K_effective), csv_cell(c.rho),
            std::string(c.satisfied ? "true" : "false")};
}

/// D_n / D_{n-1} and its delta-method standard error, for 1-based n >= 2.
std::pair<std::optional<double>, std::optional<double>> ratio_at(const std::vector<double>& d,
                                                                const std::vector<double>& se,
                                                                std::size_t n) {
    if (n < 2 || n > d.size() || !(d[n - 2] > 0.0)) return {};
    const double r = d[n - 1] / d[n - 2];
    if (se.empty()) return {r, std::nullopt};
    const double rel_next = d[n - 1] > 0.0 ? se[n - 1] / d[n - 1] : 0.0;
    return {r, r * std::hypot(rel_next, se[n - 2] / d[n - 2])};
}

void write_diagnostics(const std::filesystem::path& dir, const RunManifest& manifest,
                       const SolverDiagnostics& diag) {
    std::vector<CsvRow> rows;
    for (std::size_t n = 1; n <= diag.iterations(); ++n) {
        const auto [r, rse] = ratio_at(diag.iteration_diffs, diag.diff_stderr, n);
        CsvRow row{std::to_string(n), csv_cell(diag.iteration_diffs[n - 1]), csv_cell(diag.diff_stderr[n - 1]),
                   csv_cell(r), csv_cell(rse), "", "", ""};
        if (n == diag.iterations() && diag.residual) {
            row[5] = csv_cell(diag.residual->y.max_mean_square);
            row[6] = csv_cell(diag.residual->y.weighted);
            if (diag.residual->x) row[7] = csv_cell(diag.residual->x->max_mean_square);
        }
        rows.push_back(std::move(row));
    }
    write_csv(dir / "diagnostics.csv", manifest,
              {"n", "D_n", "D_n_stderr", "ratio", "ratio_stderr", "residual_y_max_ms", "residual_y_weighted",
               "residual_x_max_ms"},
              rows);
}

void print_warnings(const SolverDiagnostics& diag, std::ostream& err) {
    for (const auto& w : diag.warnings) err << "warning: " << w << "\n";
    if (!diag.damped.empty()) {
        err << "warning: " << diag.damped.size() << " regression(s) needed ridge damping (first at iteration "
            << diag.damped.front().iteration << ", time index " << diag.damped.front().time_index << ")\n";
    }
}

int cmd_certify(const Options& o, std::ostream& out) {
    const ProblemSpec spec = load_problem_spec(o.spec);
    const ContractionCertificate raw = check_contraction(spec);
    out << certificate_line(raw) << "\n";
    std::vector<CsvRow> rows{certificate_row("declared", raw)};
    if (spec.non_homogeneous()) {
        const ContractionCertificate composed = check_contraction_transformed(spec);
        out << "transformed: " << certificate_line(composed) << "\n";
        rows.push_back(certificate_row("transformed", composed));
    }
    std::filesystem::create_directories(o.out);
    write_csv(std::filesystem::path(o.out) / "certificate.csv", make_manifest("certify", o, {}),
              {"certificate", "mode", "K_effective", "rho", "satisfied"}, rows);
    return raw.satisfied ? kExitOk : kExitUnsatisfied;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    const ProblemSpec spec = load_problem_spec(o.spec);
    const SolverConfig cfg = make_config(spec, o, o.steps, o.paths);
    const RunManifest manifest = make_manifest("solve", o, solver_settings(o, true));
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);

    const BrownianLattice W = generate_brownian(cfg.seed, cfg.scenarios, cfg.grid, cfg.workers);
    std::optional<SolutionTriple> sol;
    try {
        sol = solve_general(spec, cfg, W);
    } catch (const SolverFailure& e) {
        write_diagnostics(dir, manifest, e.diagnostics());
        print_warnings(e.diagnostics(), err);
        err << "error: solver failed: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    const SolverDiagnostics& diag = sol->diagnostics;
    print_warnings(diag, err);

    write_csv(dir / "Y0.csv", manifest, {"y0", "stderr", "iterations", "stop_reason", "certified", "rho"},
              {{csv_cell(sol->y0()), csv_cell(diag.y0_stderr), std::to_string(diag.iterations()),
                to_string(diag.stop_reason), diag.certified ? "certified" : "uncertified",
                csv_cell(diag.certificate.rho)}});

    std::vector<CsvRow> paths;
    const std::size_t shown = std::min<std::size_t>(10, cfg.scenarios);
    for (std::size_t m = 0; m < shown; ++m) {
        for (std::size_t i = 0; i <= cfg.grid.steps(); ++i) {
            paths.push_back({std::to_string(m), std::to_string(i), csv_cell(cfg.grid.time(i)),
                             csv_cell(W.value(m, i)), sol->x ? csv_cell((*sol->x)(m, i)) : std::string(),
                             csv_cell(sol->y(m, i)), csv_cell(sol->z(m, i))});
        }
    }
    write_csv(dir / "paths.csv", manifest, {"scenario", "i", "t", "W", "X", "Y", "Z"}, paths);
    write_diagnostics(dir, manifest, diag);

    std::vector<CsvRow> residuals;
    for (std::size_t i = 0; i <= cfg.grid.steps(); ++i) {
        residuals.push_back({std::to_string(i), csv_cell(cfg.grid.time(i)),
                             csv_cell(diag.residual->y.mean_square[i]),
                             diag.residual->x ? csv_cell(diag.residual->x->mean_square[i]) : std::string()});
    }
    write_csv(dir / "residuals.csv", manifest, {"i", "t", "residual_y_ms", "residual_x_ms"}, residuals);

    out << "Y0=" << format_number(sol->y0()) << " stderr=" << format_number(diag.y0_stderr)
        << " iterations=" << diag.iterations() << " stop=" << to_string(diag.stop_reason) << " "
        << (diag.certified ? "certified" : "uncertified") << "\n";
    return kExitOk;
}

int cmd_convergence_study(const Options& o, std::ostream& out, std::ostream& err) {
    const ProblemSpec spec = load_problem_spec(o.spec);
    auto settings = solver_settings(o, false);
    settings.insert(settings.begin(), {"paths-list", join_sizes(o.paths_list)});
    settings.insert(settings.begin(), {"steps-list", join_sizes(o.steps_list)});
    if (o.oracle) settings.emplace_back("oracle", "");
    const RunManifest manifest = make_manifest("convergence-study", o, settings);
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);

    std::vector<CsvRow> rows;
    for (std::size_t N : o.steps_list) {
        std::optional<double> oracle;
        if (o.oracle) {
            if (N > o.oracle_cap) {
                err << "warning: N=" << N << " exceeds the oracle cap of " << o.oracle_cap
                    << " steps; oracle column left empty\n";
            } else {
                TreeOptions topt;
                if (o.beta_set) topt.beta = o.beta;
                oracle = tree_solve(spec, BinomialTree(TimeGrid(spec.horizon, N), o.oracle_cap), topt).y0();
            }
        }
        for (std::size_t M : o.paths_list) {
            const SolutionTriple sol = solve_general(spec, make_config(spec, o, N, M));
            const auto& d = sol.diagnostics;
            std::optional<double> gap;
            if (oracle) gap = std::abs(sol.y0() - *oracle);
            rows.push_back({std::to_string(N), std::to_string(M), csv_cell(sol.y0()), csv_cell(d.y0_stderr),
                            csv_cell(oracle), csv_cell(gap), std::to_string(d.iterations()),
                            d.contraction_ratios.empty() ? std::string() : csv_cell(d.contraction_ratios.back())});
            out << "N=" << N << " M=" << M << " Y0=" << format_number(sol.y0())
                << " stderr=" << format_number(d.y0_stderr) << "\n";
        }
    }
    write_csv(dir / "study.csv", manifest,
              {"N", "M", "y0", "stderr", "oracle_y0", "gap", "iterations", "final_ratio"}, rows);
    return kExitOk;
}

int cmd_compare_oracle(const Options& o, std::ostream& out, std::ostream& err) {
    const ProblemSpec spec = load_problem_spec(o.spec);
    const SolverConfig cfg = make_config(spec, o, o.steps, o.paths);
    const BinomialTree tree(cfg.grid, o.oracle_cap);
    const RunManifest manifest = make_manifest("compare-oracle", o, solver_settings(o, true));
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);

    TreeOptions topt;
    if (o.beta_set) topt.beta = o.beta;
    const TreeSolution exact = tree_solve(spec, tree, topt);
    const SolutionTriple mc = solve_general(spec, cfg);
    const auto& d = mc.diagnostics;
    print_warnings(d, err);

    const double gap = std::abs(mc.y0() - exact.y0());
    std::optional<double> gap_ratio;
    if (d.y0_stderr > 0.0) gap_ratio = gap / d.y0_stderr;
    else if (gap == 0.0) gap_ratio = 0.0;

    write_csv(dir / "compare_summary.csv", manifest,
              {"y0_mc", "stderr_mc", "y0_tree", "gap", "gap_over_stderr", "iterations_mc", "iterations_tree", "rho"},
              {{csv_cell(mc.y0()), csv_cell(d.y0_stderr), csv_cell(exact.y0()), csv_cell(gap), csv_cell(gap_ratio),
                std::to_string(d.iterations()), std::to_string(exact.iterations()), csv_cell(d.certificate.rho)}});

    std::vector<CsvRow> rows;
    const std::size_t n_rows = std::max(d.iterations(), exact.iterations());
    for (std::size_t n = 1; n <= n_rows; ++n) {
        std::optional<double> dm, dmse, dt;
        if (n <= d.iterations()) {
            dm = d.iteration_diffs[n - 1];
            dmse = d.diff_stderr[n - 1];
        }
        if (n <= exact.iterations()) dt = exact.iteration_diffs[n - 1];
        const auto [rm, rmse] = ratio_at(d.iteration_diffs, d.diff_stderr, n);
        const auto [rt, unused] = ratio_at(exact.iteration_diffs, {}, n);
        rows.push_back({std::to_string(n), csv_cell(dm), csv_cell(dmse), csv_cell(dt), csv_cell(rm),
                        csv_cell(rmse), csv_cell(rt)});
    }
    write_csv(dir / "compare.csv", manifest,
              {"n", "D_n_mc", "D_n_mc_stderr", "D_n_tree", "ratio_mc", "ratio_mc_stderr", "ratio_tree"}, rows);

    out << "Y0_mc=" << format_number(mc.y0()) << " stderr=" << format_number(d.y0_stderr)
        << " Y0_tree=" << format_number(exact.y0()) << " gap=" << format_number(gap);
    if (gap_ratio) out << " gap/stderr=" << format_number(*gap_ratio);
    out << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Picard/LSMC solver for delayed BSDEs and FBSDDEs", "fbsdde"};
    app.require_subcommand(1);
    Options o;

    auto* certify = app.add_subcommand("certify", "check the contraction condition");
    add_shared(certify, o, false);
    auto* solve = app.add_subcommand("solve", "Monte Carlo Picard solve");
    add_shared(solve, o, true);
    auto* study = app.add_subcommand("convergence-study", "Y(0) over a grid of (N, M)");
    add_shared(study, o, true);
    study->add_option("--steps-list", o.steps_list, "comma list of N")->delimiter(',')->capture_default_str();
    study->add_option("--paths-list", o.paths_list, "comma list of M")->delimiter(',')->capture_default_str();
    study->add_flag("--oracle", o.oracle, "add the binomial-tree Y(0) where N is within the cap");
    auto* compare = app.add_subcommand("compare-oracle", "Monte Carlo against the binomial tree");
    add_shared(compare, o, true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    for (auto* sub : {solve, study, compare}) {
        if (sub->parsed() && sub->count("--beta") > 0) o.beta_set = true;
    }
    for (std::size_t n : o.steps_list) {
        if (n == 0) {
            err << "error: --steps-list entries must be positive\n";
            return kExitUsage;
        }
    }
    for (std::size_t m : o.paths_list) {
        if (m < 2) {
            err << "error: --paths-list entries must be at least 2\n";
            return kExitUsage;
        }
    }

    try {
        if (certify->parsed()) return cmd_certify(o, out);
        if (solve->parsed()) return cmd_solve(o, out, err);
        if (study->parsed()) return cmd_convergence_study(o, out, err);
        return cmd_compare_oracle(o, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (e.code() == ErrorCode::Conditioning || e.code() == ErrorCode::NonFinite) return kExitSolverFailure;
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace fbsdde
