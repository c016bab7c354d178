#include "gwcrit/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gwcrit/errors.hpp"
#include "gwcrit/iterate.hpp"

namespace gwcrit {

double U_of(const OffspringFamily& fam, double s) { return fam.V(s) - fam.V(0.0); }

double U_prime_of(const OffspringFamily& fam, double s) {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("U_prime_of: pole at s = 1");
    return fam.J(s) * fam.V(s) / (1.0 - s);
}

double u1_of(const OffspringFamily& fam) {
    const double p0 = fam.p0();
    return (1.0 - p0 - fam.p1()) / (fam.nu() * p0 * p0);
}

std::vector<double> u_coeffs_analytic(const OffspringFamily& fam, int J, int order) {
    if (J > order) throw invalid_order_error("u_coeffs_analytic: J must not exceed the order");
    const FamilySpec& spec = fam.spec();
    const TruncSeries base = binomial_expand(-spec.nu, order);  // (1-s)^{-nu}
    std::vector<double> v(static_cast<std::size_t>(order) + 1);
    if (spec.kind == SVKind::constant) {
        const double scale = 1.0 / (spec.nu * spec.c);
        for (int k = 0; k <= order; ++k) v[k] = scale * base[k];
    } else {
        // 1/Lambda(1-s) = (1-s)^{-nu} / (c (1+d) (1 + w)),
        // w = (d/(1+d)) ((1-s)^nu - 1) with w(0) = 0.
        const TruncSeries bn = binomial_expand(spec.nu, order);
        std::vector<double> w(static_cast<std::size_t>(order) + 1, 0.0);
        const double t = spec.d / (1.0 + spec.d);
        for (int k = 1; k <= order; ++k) w[k] = t * bn[k];
        const TruncSeries recip =
            pow_one_plus(TruncSeries(std::move(w), 0.0, SeriesMode::general), -1.0);
        const TruncSeries prod = multiply(base, recip);
        const double scale = 1.0 / (spec.nu * spec.c * (1.0 + spec.d));
        for (int k = 0; k <= order; ++k) v[k] = scale * prod[k];
    }
    std::vector<double> u(static_cast<std::size_t>(J) + 1, 0.0);
    for (int j = 1; j <= J; ++j) u[j] = v[j];
    return u;
}

EmpiricalCoeffs u_coeffs_empirical(const OffspringFamily& fam, int J, std::uint64_t n_max,
                                   int order) {
    if (order < J) throw invalid_order_error("u_coeffs_empirical: order must be >= J");
    if (n_max < 4) throw domain_error("u_coeffs_empirical: n_max must be >= 4");
    // factor-2 grid descending from n_max, then reversed
    std::vector<std::uint64_t> grid;
    for (std::uint64_t n = n_max; n >= 2; n /= 2) grid.push_back(n);
    std::reverse(grid.begin(), grid.end());

    EmpiricalCoeffs out;
    out.n_grid = grid;
    SeriesIterator it(fam, order);
    for (std::uint64_t n : grid) {
        while (it.n() < n) it.step();
        const double q = it.q();
        const double denom = q * fam.lambda_y(q);
        if (denom < 1e-300) {
            throw precision_exhausted_error(it.n() - 1,
                                            "u_coeffs_empirical: denominator underflow at n = " +
                                                std::to_string(n));
        }
        std::vector<double> row(static_cast<std::size_t>(J));
        for (int j = 1; j <= J; ++j) row[j - 1] = it.p(j) / denom;
        out.u.push_back(std::move(row));
    }
    const std::size_t m = out.u.size();
    const double u_top = out.u[m - 1][0], u_half = out.u[m - 2][0];
    out.u1_extrapolated = 2.0 * u_top - u_half;  // Richardson in 1/n on a factor-2 grid
    out.u1_error_bar = std::abs(u_top - u_half);
    return out;
}

AbelResidual abel_residual(const OffspringFamily& fam, double s, std::uint64_t n) {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("abel_residual: s must lie in [0,1)");
    AbelResidual res{0.0, 0.0, 0.0, 0.0};
    if (n == 0) return res;
    double r = 1.0 - s;
    for (std::uint64_t k = 0; k < n; ++k) r = fam.next_r(r);
    const double nu = fam.nu();
    const double lam_s = fam.lambda_y(1.0 - s);
    res.lhs_lambda = 1.0 / fam.lambda_y(r) - 1.0 / lam_s;
    res.gf_form = res.lhs_lambda / nu - static_cast<double>(n);
    res.lambda_form = res.lhs_lambda - nu * static_cast<double>(n);
    res.normalized_log = res.lambda_form / std::log(lam_s * nu * static_cast<double>(n) + 1.0);
    return res;
}

namespace {

struct QuadState {
    const OffspringFamily* fam;
    double max_violation = 0.0;
    long evals = 0;

    double integrand(double y) {
        ++evals;
        const double psi = fam->J(y) / fam->nu();
        const double lo = fam->f_prime(y);
        max_violation = std::max({max_violation, lo - psi, psi - 1.0});
        return psi / ((1.0 - y) * fam->lambda_y(1.0 - y));
    }
};

double adaptive_simpson(QuadState& st, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = st.integrand(lm), frm = st.integrand(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth <= 0) throw numeric_error("integral_form_check: quadrature did not converge");
    return adaptive_simpson(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

IntegralFormResult integral_form_check(const OffspringFamily& fam, double s, double tol) {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("integral_form_check: s must lie in [0,1)");
    IntegralFormResult out{0.0, 0.0, 0.0, true};
    if (s == 0.0) return out;
    QuadState st{&fam};
    const double fa = st.integrand(0.0), fb = st.integrand(s), fm = st.integrand(0.5 * s);
    const double whole = s / 6.0 * (fa + 4.0 * fm + fb);
    out.integral = adaptive_simpson(st, 0.0, s, fa, fm, fb, whole, tol, 48);
    out.difference = std::abs(out.integral - U_of(fam, s));
    out.max_bracket_violation = std::max(0.0, st.max_violation);
    out.bracket_ok = st.max_violation <= 1e-12;
    return out;
}

std::vector<double> stationarity_residuals(const OffspringFamily& fam, int jmax, int J) {
    const std::vector<double> u = u_coeffs_analytic(fam, J, J + 2);
    const std::vector<double> fcoef = fam.coeffs(static_cast<std::size_t>(jmax) + 1);
    // P_kj(1) = [s^j] f(s)^k accumulated by repeated truncated multiplication
    std::vector<double> powk(static_cast<std::size_t>(jmax) + 1, 0.0);
    powk[0] = 1.0;
    std::vector<double> acc(static_cast<std::size_t>(jmax) + 1, 0.0);
    std::vector<double> next(powk.size());
    for (int k = 1; k <= J; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i <= jmax; ++i) {
            if (powk[i] == 0.0) continue;
            for (int j = 0; i + j <= jmax; ++j) next[i + j] += powk[i] * fcoef[j];
        }
        powk.swap(next);
        for (int j = 0; j <= jmax; ++j) acc[j] += u[k] * powk[j];
    }
    std::vector<double> r(static_cast<std::size_t>(jmax) + 1, 0.0);
    for (int j = 1; j <= jmax; ++j) r[j] = u[j] - acc[j];
    return r;
}

NormalizationTrace normalization_sum(const OffspringFamily& fam, int Jmax) {
    const std::vector<double> u = u_coeffs_analytic(fam, Jmax, Jmax + 2);
    const double p0 = fam.p0();
    NormalizationTrace out;
    double sum = 0.0, p0k = 1.0;
    for (int k = 1; k <= Jmax; ++k) {
        p0k *= p0;
        sum += u[k] * p0k;
        if (k == Jmax / 4 || k == Jmax / 2 || k == Jmax) {
            out.J.push_back(k);
            out.partial.push_back(sum);
        }
    }
    out.value = sum;
    return out;
}

}  // namespace gwcrit
