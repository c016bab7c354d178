#include "gwcrit/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gwcrit/errors.hpp"

namespace gwcrit {

void scan_iterates(const OffspringFamily& fam, double s, std::uint64_t n_max,
                   bool track_derivative, const std::function<void(const ScanPoint&)>& visit) {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("scan_iterates: s must lie in [0,1)");
    if (n_max < 1) throw domain_error("scan_iterates: n_max must be >= 1");
    const bool dual = s > 0.0;
    double q = 1.0, p1 = 1.0;
    double r = 1.0 - s, fp = 1.0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        if (track_derivative) {
            p1 *= 1.0 - fam.one_minus_f_prime_y(q);
            if (dual) fp *= 1.0 - fam.one_minus_f_prime_y(r);
        }
        q = fam.next_r(q);
        if (dual) r = fam.next_r(r);
        visit(ScanPoint{n, q, p1, dual ? r : q, dual ? fp : p1});
    }
}

IterationTrace iterate_scalar(const OffspringFamily& fam, double s, std::uint64_t n_max,
                              bool track_derivative) {
    IterationTrace trace;
    trace.s = s;
    trace.has_s = s > 0.0;
    trace.has_derivative = track_derivative;
    trace.rows.reserve(n_max);
    scan_iterates(fam, s, n_max, track_derivative, [&](const ScanPoint& pt) {
        trace.rows.push_back(TraceRow{pt.n, 1.0 - pt.q, pt.q, pt.p1, 1.0 - pt.r_s, pt.fprod_s});
    });
    return trace;
}

SeriesIterator::SeriesIterator(const OffspringFamily& fam, int order)
    : fam_(fam), order_(order) {
    if (order_ < 2) throw invalid_order_error("SeriesIterator: order must be >= 2");
    const std::size_t K = static_cast<std::size_t>(order_);
    p_.assign(K + 1, 0.0);
    CoeffStream stream(fam_);
    const double p0 = stream.next();
    q_ = 1.0 - p0;
    for (std::size_t j = 1; j <= K; ++j) p_[j] = stream.next();
    w_.assign(K + 1, 0.0);
    ya_.assign(K + 1, 0.0);
    yb_.assign(K + 1, 0.0);
}

namespace {
// y = (1+w)^alpha in place, w[0] == 0; plain recurrence, no allocation.
void pow_series(const std::vector<double>& w, double alpha, std::vector<double>& y) {
    const int K = static_cast<int>(w.size()) - 1;
    y[0] = 1.0;
    for (int j = 1; j <= K; ++j) {
        double acc = 0.0;
        for (int i = 1; i <= j; ++i) {
            acc += (alpha * i - (j - i)) * w[i] * y[j - i];
        }
        y[j] = acc / j;
    }
}
}  // namespace

void SeriesIterator::step() {
    const int K = order_;
    const FamilySpec& spec = fam_.spec();
    const double q = q_;
    for (int j = 1; j <= K; ++j) w_[j] = -p_[j] / q;  // w = R/Q - 1, w[0] = 0
    pow_series(w_, 1.0 + spec.nu, ya_);
    const double ta = spec.c * std::pow(q, 1.0 + spec.nu);
    double tb = 0.0;
    if (spec.kind == SVKind::perturbed) {
        pow_series(w_, 1.0 + 2.0 * spec.nu, yb_);
        tb = spec.c * spec.d * std::pow(q, 1.0 + 2.0 * spec.nu);
    }
    // R_{n+1} = R_n - c Q^{1+nu} (1+w)^{1+nu} - c d Q^{1+2nu} (1+w)^{1+2nu}
    q_ = q - ta - tb;
    for (int j = 1; j <= K; ++j) {
        double pj = p_[j] + ta * ya_[j];
        if (tb != 0.0) pj += tb * yb_[j];
        // exact value is >= 0 (probability); rounding noise may leave a tiny
        // negative only at the ulp level
        p_[j] = pj < 0.0 ? 0.0 : pj;
    }
    ++n_;
}

double SeriesIterator::p(int j) const {
    if (j < 1 || j > order_) throw domain_error("SeriesIterator::p: index out of range");
    return p_[static_cast<std::size_t>(j)];
}

TruncSeries SeriesIterator::snapshot() const {
    std::vector<double> c(p_.size());
    c[0] = 1.0 - q_;
    for (std::size_t j = 1; j < p_.size(); ++j) c[j] = p_[j];
    const double tail = std::max(0.0, 1.0 - neumaier_sum(c));
    return TruncSeries(std::move(c), tail, SeriesMode::pgf);
}

TruncSeries iterate_series(const OffspringFamily& fam, std::uint64_t n, int order, double budget) {
    if (n < 1) throw domain_error("iterate_series: n must be >= 1");
    const double cost = static_cast<double>(n) * static_cast<double>(order) * order;
    if (cost > budget) {
        throw budget_exceeded_error("iterate_series: n*K^2 = " + std::to_string(cost) +
                                    " exceeds budget " + std::to_string(budget));
    }
    SeriesIterator it(fam, order);
    while (it.n() < n) it.step();
    return it.snapshot();
}

namespace {
struct Pair {
    double q, r, fp;
};

Pair run_to(const OffspringFamily& fam, double s, std::uint64_t n, bool track) {
    Pair out{1.0, 1.0 - s, 1.0};
    scan_iterates(fam, s, n, track, [&](const ScanPoint& pt) {
        out = Pair{pt.q, pt.r_s, pt.fprod_s};
    });
    return out;
}
}  // namespace

double Un(const OffspringFamily& fam, double s, std::uint64_t n, double denom_floor) {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("Un: s must lie in [0,1)");
    double q = 1.0, r = 1.0 - s;
    std::uint64_t usable = 0;
    for (std::uint64_t k = 1; k <= n; ++k) {
        q = fam.next_r(q);
        r = fam.next_r(r);
        const double denom = q * fam.lambda_y(q);
        if (denom < denom_floor) {
            throw precision_exhausted_error(usable, "Un: denominator f_{n+1}(0)-f_n(0) underflowed at n = " +
                                                        std::to_string(k) + "; max usable n = " +
                                                        std::to_string(usable));
        }
        usable = k;
    }
    return (q - r) / (q * fam.lambda_y(q));
}

double Ubar_n(const OffspringFamily& fam, double s, std::uint64_t n, double denom_floor) {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("Ubar_n: s must lie in [0,1)");
    if (n < 1) throw domain_error("Ubar_n: n must be >= 1");
    double q_prev = 1.0, q = 1.0, r = 1.0 - s;
    std::uint64_t usable = 0;
    for (std::uint64_t k = 1; k <= n; ++k) {
        q_prev = q;
        q = fam.next_r(q);
        r = fam.next_r(r);
        const double denom = q_prev * fam.lambda_y(q_prev);
        if (denom < denom_floor) {
            throw precision_exhausted_error(usable, "Ubar_n: denominator underflowed; max usable n = " +
                                                        std::to_string(usable));
        }
        usable = k;
    }
    return (q - r) / (q_prev * fam.lambda_y(q_prev));
}

double psi_n(const OffspringFamily& fam, double s, std::uint64_t n) {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("psi_n: s must lie in [0,1)");
    const Pair st = run_to(fam, s, n, true);
    const double y = 1.0 - s;
    return st.fp * y * fam.lambda_y(y) / (st.r * fam.lambda_y(st.r));
}

double M_n(const OffspringFamily& fam, double s, std::uint64_t n) {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("M_n: s must lie in [0,1)");
    const Pair st = run_to(fam, s, n, false);
    return 1.0 - fam.lambda_y(st.r) / fam.lambda_y(st.q);
}

double eq38_residual(const OffspringFamily& fam, double s, std::uint64_t n) {
    const Pair st = run_to(fam, s, n, true);
    const double y = 1.0 - s;
    const double psi = st.fp * y * fam.lambda_y(y) / (st.r * fam.lambda_y(st.r));
    return psi - fam.J(s) / fam.J_y(st.r);
}

}  // namespace gwcrit
