#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gwcrit/offspring.hpp"
#include "gwcrit/series.hpp"

namespace gwcrit {

/// State after n iteration steps.  The s = 0 chain (q, p1) is always carried;
/// when s > 0 a second chain tracks r_s = 1 - f_n(s) and its derivative
/// product f'_n(s) = prod_{k<n} f'(f_k(s)).
struct ScanPoint {
    std::uint64_t n;
    double q;        // Q_n = 1 - f_n(0)
    double p1;       // p_1(n) = f'_n(0)
    double r_s;      // R_n(s)
    double fprod_s;  // f'_n(s)
};

/// Runs the scalar recursion r <- r (1 - Lambda(r)) for n = 1..n_max, invoking
/// `visit` after every step.  Iterating in survival coordinates keeps all
/// quantities cancellation-free down to Q ~ 1e-300.
void scan_iterates(const OffspringFamily& fam, double s, std::uint64_t n_max,
                   bool track_derivative, const std::function<void(const ScanPoint&)>& visit);

struct TraceRow {
    std::uint64_t n;
    double fn0;   // 1 - Q_n (saturates at 1 in binary64 once Q_n < ulp)
    double Qn;
    double p1n;
    double fn_s;  // only when a nonzero s is tracked
    double dfn_s;
};

struct IterationTrace {
    double s = 0.0;
    bool has_s = false;
    bool has_derivative = false;
    std::vector<TraceRow> rows;
};

IterationTrace iterate_scalar(const OffspringFamily& fam, double s, std::uint64_t n_max,
                              bool track_derivative);

/// Streaming truncated-series iteration of the PGF.  Coefficients p_j(n) are
/// exact (up to rounding) for every j <= order: each step re-expands f about
/// the current extinction probability via (1+w)^{1+nu} powers, so no
/// truncation error enters the retained coefficients.
class SeriesIterator {
public:
    SeriesIterator(const OffspringFamily& fam, int order);
    void step();
    std::uint64_t n() const { return n_; }
    double q() const { return q_; }
    double p(int j) const;                     // p_j(n), j >= 1
    const std::vector<double>& pcoeffs() const { return p_; }
    TruncSeries snapshot() const;              // f_n as a PGF-mode TruncSeries

private:
    OffspringFamily fam_;
    int order_;
    std::uint64_t n_ = 1;
    double q_;
    std::vector<double> p_;   // p_1..p_K (index 0 unused)
    std::vector<double> w_, ya_, yb_;
};

/// f_n as a truncated series; guard: n * K^2 must not exceed `budget`.
TruncSeries iterate_series(const OffspringFamily& fam, std::uint64_t n, int order,
                           double budget = 2e10);

/// Normalized iterates of the invariant-measure construction.  Denominators
/// f_{n+1}(0) - f_n(0) = Q_n Lambda(Q_n); below `denom_floor` a
/// precision_exhausted_error carrying the largest usable n is thrown.
double Un(const OffspringFamily& fam, double s, std::uint64_t n, double denom_floor = 1e-300);
double Ubar_n(const OffspringFamily& fam, double s, std::uint64_t n, double denom_floor = 1e-300);

/// psi_n(s) = -R'_n(s) (1-s) Lambda(1-s) / (R_n(s) Lambda(R_n(s))).
double psi_n(const OffspringFamily& fam, double s, std::uint64_t n);

/// M_n(s) = 1 - Lambda(R_n(s)) / Lambda(Q_n);  n M_n(s) -> U(s).
double M_n(const OffspringFamily& fam, double s, std::uint64_t n);

/// Diagnostic residual psi_n(s) - J(s)/J(R_n(s)); the equality behind it routes
/// through the Abel equation and is not assumed exact.
double eq38_residual(const OffspringFamily& fam, double s, std::uint64_t n);

}  // namespace gwcrit
