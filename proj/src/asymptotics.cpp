#include "gwcrit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gwcrit/errors.hpp"
#include "gwcrit/invariant.hpp"
#include "gwcrit/iterate.hpp"

namespace gwcrit {

std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, int per_decade) {
    if (lo < 1 || hi < lo) throw domain_error("geometric_grid: need 1 <= lo <= hi");
    if (per_decade < 1) throw domain_error("geometric_grid: per_decade must be >= 1");
    std::set<std::uint64_t> pts;
    const double step = std::pow(10.0, 1.0 / per_decade);
    for (double x = static_cast<double>(lo); x <= static_cast<double>(hi) * (1.0 + 1e-12);
         x *= step) {
        pts.insert(static_cast<std::uint64_t>(std::llround(x)));
    }
    pts.insert(lo);
    pts.insert(hi);
    return {pts.begin(), pts.end()};
}

LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t N = xs.size();
    if (N < 2 || ys.size() != N) throw domain_error("fit_linear: need >= 2 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= N;
    my /= N;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw numeric_error("fit_linear: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    const std::size_t dof = N > 2 ? N - 2 : 1;
    fit.slope_se = std::sqrt(ss / dof / sxx);
    return fit;
}

double N_nu(const OffspringFamily& fam, double Qn) {
    if (!(Qn > 0.0)) throw domain_error("N_nu: Q_n must be positive");
    return std::pow(fam.L(1.0 / Qn), -1.0 / fam.nu());
}

namespace {

/// Collects scan points at the requested grid indices.
std::vector<ScanPoint> collect(const OffspringFamily& fam, double s,
                               const std::vector<std::uint64_t>& grid, bool track) {
    if (grid.empty()) throw domain_error("asymptotics: empty n-grid");
    std::vector<ScanPoint> out;
    out.reserve(grid.size());
    std::size_t gi = 0;
    scan_iterates(fam, s, grid.back(), track, [&](const ScanPoint& pt) {
        if (gi < grid.size() && pt.n == grid[gi]) {
            out.push_back(pt);
            ++gi;
        }
    });
    return out;
}

std::vector<double> every_other(const std::vector<double>& xs) {
    std::vector<double> out;
    for (std::size_t i = 0; i < xs.size(); i += 2) out.push_back(xs[i]);
    return out;
}

void fit_loglog_abs(AsymReport& rep) {
    std::vector<double> lx, ly;
    for (const AsymRecord& r : rep.records) {
        if (r.n >= 2.0 && std::abs(r.normalized) > 0.0) {
            lx.push_back(std::log(r.n));
            ly.push_back(std::log(std::abs(r.normalized)));
        }
    }
    if (lx.size() >= 2) rep.fit = fit_linear(lx, ly);
    if (lx.size() >= 4) rep.fit_nested = fit_linear(every_other(lx), every_other(ly));
}

void fit_on_lognn(AsymReport& rep) {
    std::vector<double> xs, ys;
    for (const AsymRecord& r : rep.records) {
        if (r.n >= 2.0) {
            xs.push_back(std::log(r.n) / r.n);
            ys.push_back(r.lhs - r.rhs_main);
        }
    }
    if (xs.size() >= 2) rep.fit = fit_linear(xs, ys);
    if (xs.size() >= 4) rep.fit_nested = fit_linear(every_other(xs), every_other(ys));
}

}  // namespace

AsymReport basic_lemma_check(const OffspringFamily& fam, const std::vector<std::uint64_t>& grid) {
    AsymReport rep;
    rep.quantity = "basic_lemma";
    rep.family = fam.spec().to_string();
    rep.target_slope = 0.0;
    const double nu = fam.nu();
    for (const ScanPoint& pt : collect(fam, 0.0, grid, false)) {
        const double n = static_cast<double>(pt.n);
        const double scale = std::pow(nu * n, 1.0 / nu);
        const double lhs = pt.q * scale * std::pow(fam.L(scale / N_nu(fam, pt.q)), 1.0 / nu);
        AsymRecord rec{n, lhs, 1.0, 0.0, 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main - rec.rhs_correction;
        rec.normalized = rec.residual;
        rep.records.push_back(rec);
    }
    fit_loglog_abs(rep);
    return rep;
}

AsymReport basic_lemma_un(const OffspringFamily& fam, double s,
                          const std::vector<std::uint64_t>& grid) {
    AsymReport rep;
    rep.quantity = "basic_lemma_un";
    rep.family = fam.spec().to_string();
    const double nu = fam.nu();
    const double Uref = s > 0.0 ? U_of(fam, s) : 0.0;
    rep.reference = Uref;
    for (const ScanPoint& pt : collect(fam, s, grid, false)) {
        const double n = static_cast<double>(pt.n);
        const double lhs = nu * n * (1.0 - pt.r_s / pt.q);  // implied U_n(s)
        AsymRecord rec{n, lhs, Uref, 0.0, 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main;
        rec.normalized = Uref != 0.0 ? rec.residual / Uref : rec.residual;
        rep.records.push_back(rec);
    }
    return rep;
}

AsymReport lemma3_check(const OffspringFamily& fam, double s,
                        const std::vector<std::uint64_t>& grid) {
    AsymReport rep;
    rep.quantity = "lemma3";
    rep.family = fam.spec().to_string();
    const double nu = fam.nu();
    const double lam_s = fam.lambda_y(1.0 - s);
    for (const ScanPoint& pt : collect(fam, s, grid, false)) {
        const double n = static_cast<double>(pt.n);
        AsymRecord rec{n, 1.0 / fam.lambda_y(pt.r_s) - 1.0 / lam_s, nu * n,
                       0.5 * (1.0 + nu) * std::log(lam_s * nu * n + 1.0), 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main - rec.rhs_correction;  // rho_n(s)
        rec.normalized = n > 1.0 ? rec.residual / std::log(n) : rec.residual;
        rep.records.push_back(rec);
    }
    return rep;
}

QnRefined qn_refined(const OffspringFamily& fam, std::uint64_t n) {
    if (n < 1) throw domain_error("qn_refined: n must be >= 1");
    double q = 1.0;
    for (std::uint64_t k = 0; k < n; ++k) q = fam.next_r(q);
    QnRefined out{};
    out.exact = q;
    const double nu = fam.nu(), nn = static_cast<double>(n);
    out.one_term = N_nu(fam, q) / std::pow(nu * nn, 1.0 / nu);
    out.two_term = out.one_term * (1.0 - 1.0 / (fam.p0() * nu * nn));
    out.rel_error = std::abs(out.two_term / out.exact - 1.0);
    return out;
}

AsymReport qn_refined_report(const OffspringFamily& fam, const std::vector<std::uint64_t>& grid) {
    AsymReport rep;
    rep.quantity = "qn_refined";
    rep.family = fam.spec().to_string();
    const double nu = fam.nu(), p0 = fam.p0();
    for (const ScanPoint& pt : collect(fam, 0.0, grid, false)) {
        const double n = static_cast<double>(pt.n);
        const double one = N_nu(fam, pt.q) / std::pow(nu * n, 1.0 / nu);
        AsymRecord rec{n, pt.q, one, -one / (p0 * nu * n), 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main - rec.rhs_correction;
        rec.normalized = (one / pt.q - 1.0) * p0 * nu * n;
        rep.records.push_back(rec);
    }
    return rep;
}

AsymReport thm3_rate_check(const OffspringFamily& fam, double s,
                           const std::vector<std::uint64_t>& grid, Normalization norm) {
    AsymReport rep;
    rep.quantity = norm == Normalization::analytic ? "thm3_rate" : "thm3_rate_empirical";
    rep.family = fam.spec().to_string();
    rep.target_slope = 0.0;  // log-log trend of |n e_n| for an O(1/n) rate
    const std::vector<ScanPoint> pts = collect(fam, s, grid, true);
    auto u_prime_n = [&](const ScanPoint& pt) {
        return pt.fprod_s / (pt.q * fam.lambda_y(pt.q));
    };
    double ref;
    if (norm == Normalization::analytic) {
        ref = U_prime_of(fam, s);
    } else {
        // two-point Richardson in 1/n at the top of the grid
        const ScanPoint& top = pts.back();
        const ScanPoint& half = pts[pts.size() >= 2 ? pts.size() - 2 : 0];
        const double ut = u_prime_n(top), uh = u_prime_n(half);
        const double nt = static_cast<double>(top.n), nh = static_cast<double>(half.n);
        ref = nh != nt ? (nt * ut - nh * uh) / (nt - nh) : ut;
    }
    rep.reference = ref;
    for (const ScanPoint& pt : pts) {
        const double n = static_cast<double>(pt.n);
        AsymRecord rec{n, u_prime_n(pt) / ref, 1.0, 0.0, 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main;  // e_n
        rec.normalized = n * rec.residual;      // n e_n
        rep.records.push_back(rec);
    }
    fit_loglog_abs(rep);
    return rep;
}

AsymReport thm4_local_limit(const OffspringFamily& fam, const std::vector<std::uint64_t>& grid,
                            Normalization norm) {
    AsymReport rep;
    rep.quantity = norm == Normalization::analytic ? "thm4_local_limit" : "thm4_local_limit_empirical";
    rep.family = fam.spec().to_string();
    const double nu = fam.nu();
    rep.target_slope = -(1.0 + nu) * (1.0 + nu) / (2.0 * nu * nu);
    const std::vector<ScanPoint> pts = collect(fam, 0.0, grid, true);
    double u1ref;
    if (norm == Normalization::analytic) {
        u1ref = u1_of(fam);
    } else {
        const ScanPoint& top = pts.back();
        const ScanPoint& half = pts[pts.size() >= 2 ? pts.size() - 2 : 0];
        auto u1n = [&](const ScanPoint& pt) { return pt.p1 / (pt.q * fam.lambda_y(pt.q)); };
        const double nt = static_cast<double>(top.n), nh = static_cast<double>(half.n);
        u1ref = nh != nt ? (nt * u1n(top) - nh * u1n(half)) / (nt - nh) : u1n(top);
    }
    rep.reference = u1ref;
    for (const ScanPoint& pt : pts) {
        const double n = static_cast<double>(pt.n);
        const double Pnu = std::pow(nu * n, (1.0 + nu) / nu) * pt.p1;
        const double lhs = Pnu / (N_nu(fam, pt.q) * u1ref);
        AsymRecord rec{n, lhs, 1.0, rep.target_slope * std::log(n) / n, 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main - rec.rhs_correction;
        rec.normalized = n > 1.0 ? (lhs - 1.0) * n / std::log(n) : 0.0;  // g_n
        rep.records.push_back(rec);
    }
    fit_on_lognn(rep);
    return rep;
}

AsymReport proposition_diagnostic(const OffspringFamily& fam, int j,
                                  const std::vector<std::uint64_t>& grid, int order,
                                  Normalization norm, double budget) {
    if (j < 1 || j > order) throw domain_error("proposition_diagnostic: need 1 <= j <= order");
    const std::uint64_t n_top = grid.back();
    const double cost = static_cast<double>(n_top) * order * order;
    if (cost > budget) {
        throw budget_exceeded_error("proposition_diagnostic: n*K^2 exceeds budget");
    }
    AsymReport rep;
    rep.quantity = "proposition_j" + std::to_string(j) +
                   (norm == Normalization::empirical ? "_empirical" : "");
    rep.family = fam.spec().to_string();
    const double nu = fam.nu();
    rep.target_slope = -(1.0 + nu) * (1.0 + nu) / (2.0 * nu * nu);

    SeriesIterator it(fam, order);
    std::vector<std::pair<std::uint64_t, std::pair<double, double>>> samples;  // n -> (q, p_j)
    for (std::uint64_t n : grid) {
        while (it.n() < n) it.step();
        samples.push_back({n, {it.q(), it.p(j)}});
    }
    double ujref;
    if (norm == Normalization::analytic) {
        ujref = u_coeffs_analytic(fam, j, j + 2)[static_cast<std::size_t>(j)];
    } else {
        const auto& top = samples.back();
        const auto& half = samples[samples.size() >= 2 ? samples.size() - 2 : 0];
        auto ujn = [&](const std::pair<std::uint64_t, std::pair<double, double>>& s_) {
            return s_.second.second / (s_.second.first * fam.lambda_y(s_.second.first));
        };
        const double nt = static_cast<double>(top.first), nh = static_cast<double>(half.first);
        ujref = nh != nt ? (nt * ujn(top) - nh * ujn(half)) / (nt - nh) : ujn(top);
    }
    rep.reference = ujref;
    for (const auto& [n_, qp] : samples) {
        const double n = static_cast<double>(n_);
        const double Pj = std::pow(nu * n, (1.0 + nu) / nu) * qp.second;
        const double lhs = Pj / (N_nu(fam, qp.first) * ujref);
        AsymRecord rec{n, lhs, 1.0, rep.target_slope * std::log(n) / n, 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main - rec.rhs_correction;
        rec.normalized = n > 1.0 ? (lhs - 1.0) * n / std::log(n) : 0.0;
        rep.records.push_back(rec);
    }
    fit_on_lognn(rep);
    return rep;
}

AsymReport eq38_report(const OffspringFamily& fam, double s,
                       const std::vector<std::uint64_t>& grid) {
    AsymReport rep;
    rep.quantity = "eq38_residual";
    rep.family = fam.spec().to_string();
    const double y = 1.0 - s;
    const double Js = fam.J(s);
    for (const ScanPoint& pt : collect(fam, s, grid, true)) {
        const double psi = pt.fprod_s * y * fam.lambda_y(y) / (pt.r_s * fam.lambda_y(pt.r_s));
        AsymRecord rec{static_cast<double>(pt.n), psi, Js / fam.J_y(pt.r_s), 0.0, 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main;
        rec.normalized = rec.residual;
        rep.records.push_back(rec);
    }
    return rep;
}

AsymReport nnu_report(const OffspringFamily& fam, const std::vector<std::uint64_t>& grid) {
    AsymReport rep;
    rep.quantity = "nnu";
    rep.family = fam.spec().to_string();
    const double nu = fam.nu();
    const double CN = std::pow(fam.C_L(), -1.0 / nu);
    rep.reference = CN;
    for (const ScanPoint& pt : collect(fam, 0.0, grid, false)) {
        const double n = static_cast<double>(pt.n);
        AsymRecord rec{n, N_nu(fam, pt.q), CN, 0.0, 0.0, 0.0};
        rec.residual = rec.lhs - rec.rhs_main;
        rec.normalized = rec.residual * std::pow(n, nu);
        rep.records.push_back(rec);
    }
    return rep;
}

}  // namespace gwcrit
