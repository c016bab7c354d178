#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwcrit/offspring.hpp"

namespace gwcrit {

/// One expansion record; residual = lhs - rhs_main - rhs_correction exactly
/// (bookkeeping identity), `normalized` is the per-quantity scaled residual.
struct AsymRecord {
    double n;
    double lhs;
    double rhs_main;
    double rhs_correction;
    double residual;
    double normalized;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
};

/// Which limit a check is normalized against: the closed-form expressions
/// (V(s) - V(0) and its derivatives) or the empirically extrapolated limit of
/// the same trace.  Checks default to the analytic normalization; the
/// empirical variant is emitted alongside as a diagnostic.
enum class Normalization { analytic, empirical };

struct AsymReport {
    std::string quantity;
    std::string family;
    std::vector<AsymRecord> records;
    LinearFit fit;             // on the full grid
    LinearFit fit_nested;      // on every other grid point
    double target_slope = 0.0;
    double reference = 0.0;    // normalization constant actually used
    std::string note;
};

/// Geometric n-grid from lo to hi with `per_decade` points per decade.
std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, int per_decade);

LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

/// N_nu(n) = L(1/Q_n)^{-1/nu}.
double N_nu(const OffspringFamily& fam, double Qn);

/// Survival scaling law: lhs = Q_n (nu n)^{1/nu} L^{1/nu}((nu n)^{1/nu}/N_nu(n)) vs 1.
AsymReport basic_lemma_check(const OffspringFamily& fam, const std::vector<std::uint64_t>& grid);

/// Implied U_n(s) = nu n (1 - R_n(s)/Q_n); exactly 0 at s = 0, -> U(s).
AsymReport basic_lemma_un(const OffspringFamily& fam, double s,
                          const std::vector<std::uint64_t>& grid);

/// Log-corrected drift expansion: lhs = 1/Lambda(R_n) - 1/Lambda(1-s); main
/// nu n; correction (1+nu)/2 ln(Lambda(1-s) nu n + 1); residual rho_n,
/// normalized rho_n/ln n.
AsymReport lemma3_check(const OffspringFamily& fam, double s,
                        const std::vector<std::uint64_t>& grid);

struct QnRefined {
    double exact;
    double one_term;   // N_nu(n) / (nu n)^{1/nu}
    double two_term;   // one_term (1 - 1/(p0 nu n))
    double rel_error;  // |two_term/exact - 1|
};

QnRefined qn_refined(const OffspringFamily& fam, std::uint64_t n);

/// Grid report; normalized column is (one_term/Q_n - 1) p0 nu n.
AsymReport qn_refined_report(const OffspringFamily& fam, const std::vector<std::uint64_t>& grid);

/// Derivative convergence rate: lhs = U'_n(s)/U'(s); residual e_n; normalized
/// n e_n.  The fit is a log-log trend of |n e_n| (slope 0 for an O(1/n) rate).
AsymReport thm3_rate_check(const OffspringFamily& fam, double s,
                           const std::vector<std::uint64_t>& grid,
                           Normalization norm = Normalization::analytic);

/// Local limit theorem for p_1(n): lhs = P_nu(n)/(N_nu(n) u1); normalized
/// g_n = (lhs-1) n/ln n; OLS of (lhs-1) on ln n / n targets -(1+nu)^2/(2 nu^2).
AsymReport thm4_local_limit(const OffspringFamily& fam, const std::vector<std::uint64_t>& grid,
                            Normalization norm = Normalization::analytic);

/// General-j scaling diagnostic (series iteration; budget-guarded like
/// iterate_series).  lhs = P^{j}_nu(n)/(N_nu(n) u_j).
AsymReport proposition_diagnostic(const OffspringFamily& fam, int j,
                                  const std::vector<std::uint64_t>& grid, int order,
                                  Normalization norm = Normalization::analytic,
                                  double budget = 2e10);

/// Residual of the psi identity: psi_n(s) - J(s)/J(R_n(s)) over an n-grid.
AsymReport eq38_report(const OffspringFamily& fam, double s,
                       const std::vector<std::uint64_t>& grid);

/// N_nu(n) vs C_N = C_L^{-1/nu}; normalized |N_nu - C_N| n^nu (bounded under
/// the remainder-rate condition).
AsymReport nnu_report(const OffspringFamily& fam, const std::vector<std::uint64_t>& grid);

}  // namespace gwcrit
