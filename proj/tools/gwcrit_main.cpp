// gwcrit: validation campaigns for critical branching-process generating
// functions: exact GF iteration, invariant-measure closed forms, asymptotic
// expansions, and Monte Carlo cross-checks.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gwcrit/campaign.hpp"
#include "gwcrit/errors.hpp"
#include "gwcrit/invariant.hpp"
#include "gwcrit/report.hpp"

namespace {

using namespace gwcrit;

struct FamilyOpts {
    std::string family = "stable";
    double nu = 0.5;
    double c = 0.5;
    double d = 0.2;
};

void add_family_flags(CLI::App* cmd, FamilyOpts& fo) {
    cmd->add_option("--family", fo.family, "offspring family")
        ->check(CLI::IsMember({"stable", "perturbed"}));
    cmd->add_option("--nu", fo.nu, "tail index nu in (0,1)");
    cmd->add_option("--c", fo.c, "slowly varying level c");
    cmd->add_option("--d", fo.d, "perturbation size d (perturbed family)");
}

OffspringFamily make_family(const FamilyOpts& fo) {
    FamilySpec spec;
    spec.kind = fo.family == "stable" ? SVKind::constant : SVKind::perturbed;
    spec.nu = fo.nu;
    spec.c = fo.c;
    spec.d = fo.family == "stable" ? 0.0 : fo.d;
    return OffspringFamily::from_spec(spec);
}

void emit_table(const CsvTable& table, const std::string& out, const std::string& format) {
    std::string content;
    if (format == "json") {
        nlohmann::json j;
        j["columns"] = table.columns;
        j["rows"] = table.rows;
        content = j.dump(2);
    } else {
        content = to_csv(table);
    }
    if (out.empty()) {
        std::cout << content;
    } else {
        write_text_atomic(out, content);
    }
}

void emit_text(const std::string& content, const std::string& out) {
    if (out.empty()) {
        std::cout << content << '\n';
    } else {
        write_text_atomic(out, content);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gwcrit: critical Galton-Watson generating-function numerics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");
    app.allow_config_extras(CLI::config_extras_mode::error);

    FamilyOpts fo;
    std::string out, format = "csv";
    std::uint64_t n = 20, nmax = 10'000, nmin = 10;
    double s = 0.0;
    int order = 512, jmax = 8, j_index = 2, per_decade = 4, depth = 1000;
    std::uint64_t reps = 1'000'000, seed = 42;
    std::uint32_t workers = 0;
    std::uint64_t pop_cap = 10'000'000, support_cap = 1ULL << 32;
    std::string normalization = "analytic";
    double eval_at = -1.0;
    int initial = 1;

    // family validate
    CLI::App* family = app.add_subcommand("family", "offspring family inspection");
    CLI::App* validate = family->add_subcommand("validate", "validate coefficients and mass");
    add_family_flags(validate, fo);
    validate->add_option("--depth", depth, "coefficients to check");

    // iterate
    CLI::App* iterate = app.add_subcommand("iterate", "scalar GF iteration trace");
    add_family_flags(iterate, fo);
    iterate->add_option("--nmax", nmax, "iterations");
    iterate->add_option("--s", s, "tracked point in [0,1)");
    iterate->add_option("--out", out, "output file (stdout if omitted)");
    iterate->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    // coeffs
    CLI::App* coeffs = app.add_subcommand("coeffs", "transition probabilities p_j(n)");
    add_family_flags(coeffs, fo);
    coeffs->add_option("--n", n, "generation");
    coeffs->add_option("--order", order, "series truncation order");
    coeffs->add_option("--jmax", jmax, "largest j reported");
    coeffs->add_option("--eval-at", eval_at, "also evaluate [f_n(x)]^i at this x");
    coeffs->add_option("--initial", initial, "initial population i for the evaluation");
    coeffs->add_option("--out", out, "output file (stdout if omitted)");
    coeffs->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    // invariant
    CLI::App* invariant = app.add_subcommand("invariant", "invariant-measure report");
    add_family_flags(invariant, fo);
    invariant->add_option("--jmax", jmax, "coefficients reported");
    invariant->add_option("--order", order, "series order for analytic coefficients");
    invariant->add_option("--nmax", nmax, "empirical-coefficient trace ceiling");
    invariant->add_option("--out", out, "output file (stdout if omitted)");

    // asym <check>
    std::string out_summary;
    CLI::App* asym = app.add_subcommand("asym", "asymptotic-expansion checks");
    asym->require_subcommand(1);
    std::vector<CLI::App*> checks;
    for (const char* name : {"basic", "un", "lemma3", "qn", "thm3", "thm4", "prop", "eq38", "nnu"}) {
        CLI::App* c = asym->add_subcommand(name);
        add_family_flags(c, fo);
        c->add_option("--nmin", nmin);
        c->add_option("--nmax", nmax);
        c->add_option("--per-decade", per_decade);
        c->add_option("--s", s);
        c->add_option("--j", j_index, "coefficient index (prop)");
        c->add_option("--order", order);
        c->add_option("--normalization", normalization)
            ->check(CLI::IsMember({"analytic", "empirical"}));
        c->add_option("--out", out, "CSV output file (stdout if omitted)");
        c->add_option("--out-summary", out_summary, "fit summary JSON file");
        c->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
        checks.push_back(c);
    }

    // simulate
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo branching simulation");
    add_family_flags(simulate_cmd, fo);
    simulate_cmd->add_option("--n", n, "horizon (generations)");
    simulate_cmd->add_option("--reps", reps, "replicates");
    simulate_cmd->add_option("--seed", seed, "master seed");
    simulate_cmd->add_option("--jmax", jmax, "occupancy buckets");
    simulate_cmd->add_option("--workers", workers, "worker threads (0 = auto)");
    simulate_cmd->add_option("--pop-cap", pop_cap, "population cap per generation");
    simulate_cmd->add_option("--support-cap", support_cap, "offspring support cap");
    simulate_cmd->add_option("--out", out, "output JSON file (stdout if omitted)");

    // report
    std::uint64_t report_nmax = 1'000'000;
    CLI::App* report = app.add_subcommand("report", "full validation campaign");
    report->add_option("--out", out, "output directory")->required();
    report->add_option("--seed", seed, "Monte Carlo master seed");
    report->add_option("--reps", reps, "Monte Carlo replicates");
    report->add_option("--workers", workers, "worker threads (0 = auto)");
    report->add_option("--nmax", report_nmax, "scalar-trace ceiling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
    }

    try {
        if (validate->parsed()) {
            const OffspringFamily fam = make_family(fo);
            const ValidationReport rep = fam.validate(static_cast<std::size_t>(depth));
            std::printf("family: %s\n", fam.spec().to_string().c_str());
            std::printf("coefficients p_0..p_7:");
            for (std::size_t k = 0; k < std::min<std::size_t>(8, rep.head.size()); ++k) {
                std::printf(" %s", format_g17(rep.head[k]).c_str());
            }
            std::printf("\nmin coefficient %s at index %zu\n", format_g17(rep.min_coeff).c_str(),
                        rep.min_index);
            std::printf("mass: truncated %s + tail bound %s (defect %s)\n",
                        format_g17(rep.truncated_mass).c_str(), format_g17(rep.tail_bound).c_str(),
                        format_g17(rep.truncated_mass + rep.tail_bound - 1.0).c_str());
            std::printf("mean m = %g, critical = %s\n", rep.mean, rep.critical ? "yes" : "no");
            return 0;
        }
        if (iterate->parsed()) {
            const OffspringFamily fam = make_family(fo);
            IterationTrace trace;
            if (nmax <= 10'000) {
                trace = iterate_scalar(fam, s, nmax, true);
            } else {
                trace.s = s;
                trace.has_s = s > 0.0;
                trace.has_derivative = true;
                const auto grid = geometric_grid(1, nmax, 16);
                std::size_t gi = 0;
                scan_iterates(fam, s, nmax, true, [&](const ScanPoint& pt) {
                    if (gi < grid.size() && pt.n == grid[gi]) {
                        trace.rows.push_back(TraceRow{pt.n, 1.0 - pt.q, pt.q, pt.p1,
                                                      1.0 - pt.r_s, pt.fprod_s});
                        ++gi;
                    }
                });
            }
            emit_table(trace_to_csv(trace), out, format);
            return 0;
        }
        if (coeffs->parsed()) {
            const OffspringFamily fam = make_family(fo);
            const TruncSeries fn = iterate_series(fam, n, order);
            CsvTable table;
            table.columns = {"j", "p_j"};
            for (int jj = 0; jj <= std::min(jmax, fn.order()); ++jj) {
                table.rows.push_back({static_cast<double>(jj), fn[jj]});
            }
            emit_table(table, out, format);
            if (eval_at >= 0.0) {
                const EvalInterval iv = eval(fn, eval_at);
                double lo = 1.0, hi = 1.0;
                for (int i = 0; i < initial; ++i) {
                    lo *= iv.lower;
                    hi *= iv.upper;
                }
                std::printf("[f_n(%s)]^%d in [%s, %s]\n", format_g17(eval_at).c_str(), initial,
                            format_g17(lo).c_str(), format_g17(hi).c_str());
            }
            return 0;
        }
        if (invariant->parsed()) {
            const OffspringFamily fam = make_family(fo);
            nlohmann::json inv;
            inv["family"] = fam.spec().to_string();
            inv["u1_analytic"] = u1_of(fam);
            const std::vector<double> u = u_coeffs_analytic(fam, jmax, order);
            inv["u_coeffs"] = std::vector<double>(u.begin() + 1, u.end());
            const std::vector<double> rj = stationarity_residuals(fam, std::min(jmax, 16), 256);
            inv["stationarity_residuals"] = std::vector<double>(rj.begin() + 1, rj.end());
            const NormalizationTrace norm = normalization_sum(fam, 512);
            inv["normalization_sum"] = norm.value;
            nlohmann::json abel_rows = nlohmann::json::array();
            for (std::uint64_t nn : geometric_grid(1, nmax, 2)) {
                const AbelResidual a = abel_residual(fam, s, nn);
                abel_rows.push_back({static_cast<double>(nn), a.lhs_lambda, a.gf_form,
                                     a.lambda_form, a.normalized_log});
            }
            inv["abel_residual_table"] = abel_rows;
            const EmpiricalCoeffs emp =
                u_coeffs_empirical(fam, std::min(jmax, 8), std::max<std::uint64_t>(nmax, 64), 16);
            inv["u1_empirical_extrapolated"] = emp.u1_extrapolated;
            inv["u1_empirical_error_bar"] = emp.u1_error_bar;
            const IntegralFormResult integral = integral_form_check(fam, 0.5);
            inv["integral_form_difference"] = integral.difference;
            inv["integral_form_bracket_ok"] = integral.bracket_ok;
            emit_text(inv.dump(2), out);
            return 0;
        }
        for (std::size_t ci = 0; ci < checks.size(); ++ci) {
            if (!checks[ci]->parsed()) continue;
            const OffspringFamily fam = make_family(fo);
            const Normalization norm = normalization == "empirical" ? Normalization::empirical
                                                                    : Normalization::analytic;
            const auto grid = geometric_grid(nmin, nmax, per_decade);
            AsymReport rep;
            const std::string name = checks[ci]->get_name();
            if (name == "basic") rep = basic_lemma_check(fam, grid);
            else if (name == "un") rep = basic_lemma_un(fam, s, grid);
            else if (name == "lemma3") rep = lemma3_check(fam, s, grid);
            else if (name == "qn") rep = qn_refined_report(fam, grid);
            else if (name == "thm3") rep = thm3_rate_check(fam, s, grid, norm);
            else if (name == "thm4") rep = thm4_local_limit(fam, grid, norm);
            else if (name == "prop") rep = proposition_diagnostic(fam, j_index, grid, order, norm);
            else if (name == "eq38") rep = eq38_report(fam, s, grid);
            else if (name == "nnu") rep = nnu_report(fam, grid);
            emit_table(asym_to_csv(rep), out, format);
            if (!out_summary.empty()) {
                write_text_atomic(out_summary, asym_summary_json(rep, true));
            }
            return 0;
        }
        if (simulate_cmd->parsed()) {
            SimConfig cfg;
            cfg.family = make_family(fo).spec();
            cfg.horizon = static_cast<std::uint32_t>(n);
            cfg.replicates = reps;
            cfg.seed = seed;
            cfg.jmax = static_cast<std::uint32_t>(jmax);
            cfg.workers = workers;
            cfg.population_cap = pop_cap;
            cfg.support_cap = support_cap;
            const SimResult res = simulate(cfg);
            emit_text(montecarlo_json(res), out);
            return 0;
        }
        if (report->parsed()) {
            CampaignConfig cfg;
            cfg.out_dir = out;
            cfg.seed = seed;
            cfg.reps = reps;
            cfg.workers = workers;
            cfg.n_long = report_nmax;
            const CampaignSummary summary = run_campaign(cfg);
            for (const CriterionResult& c : summary.criteria) {
                std::printf("[%s] criterion %d: %s -- %s\n", c.pass ? "PASS" : "FAIL", c.id,
                            c.name.c_str(), c.detail.c_str());
            }
            std::printf("%s (%zu artifacts in %s)\n",
                        summary.all_pass ? "ALL CRITERIA PASS" : "CRITERIA FAILURES PRESENT",
                        summary.artifacts.size(), out.c_str());
            return summary.all_pass ? 0 : 1;
        }
    } catch (const budget_exceeded_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
