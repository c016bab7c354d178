#pragma once

#include <cstddef>
#include <vector>

namespace gwcrit {

/// PGF mode activates the nonnegativity / mass invariants; general mode is a
/// plain signed truncated series (binomial expansions, derivatives, ...).
enum class SeriesMode { pgf, general };

struct EvalInterval {
    double lower;
    double upper;
};

/// Truncated power series with tail-mass bookkeeping.
///
/// `coeffs[k]` is the coefficient of s^k, k = 0..order.  `tail_mass` is an
/// upper bound on the total mass dropped by truncation; `tail_at_order` is the
/// lowest index at which dropped mass may sit (order+1 when the retained
/// coefficients are exact, 0 after a generic composition where truncation
/// error leaks into retained indices as a deficit).  An unbounded tail is
/// represented by tail_mass = +infinity.
class TruncSeries {
public:
    TruncSeries() = default;
    TruncSeries(std::vector<double> coeffs, double tail_mass, SeriesMode mode);
    TruncSeries(std::vector<double> coeffs, double tail_mass, SeriesMode mode, int tail_at_order);

    static TruncSeries identity(int order);  // the series "s"
    static TruncSeries zero(int order);

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    double operator[](int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
    }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double tail_mass() const { return tail_mass_; }
    bool tail_bounded() const;
    int tail_at_order() const { return tail_at_order_; }
    SeriesMode mode() const { return mode_; }

    /// Compensated (Neumaier) sum of the retained coefficients.
    double sum() const;

private:
    std::vector<double> coeffs_;
    double tail_mass_ = 0.0;
    int tail_at_order_ = 1;
    SeriesMode mode_ = SeriesMode::general;
};

/// Series of (1-s)^beta up to the given order, any real beta.
/// For 1 < beta < 2 the coefficients are [1, -beta, +, +, ...] and the tail
/// bound |binom(beta-1, order)| is exact; for beta <= 0 the tail is unbounded.
TruncSeries binomial_expand(double beta, int order);

/// |binom(x, k)| computed by the magnitude-ratio recurrence (overflow-free).
double abs_binomial(double x, int k);

/// Product truncated at min(order a, order b); crossterms beyond the order are
/// accumulated into the tail bound exactly when both inputs are nonnegative.
TruncSeries multiply(const TruncSeries& a, const TruncSeries& b);

/// Horner composition in the truncated ring, outer(inner(s)).  In PGF mode the
/// retained coefficients are exact lower bounds of the true composition
/// coefficients and sum+tail_mass still brackets the unit mass from above.
TruncSeries compose(const TruncSeries& outer, const TruncSeries& inner);

/// Termwise derivative, order K-1.  Tail is carried only for exact
/// polynomials (tail 0); otherwise flagged unbounded.
TruncSeries derivative(const TruncSeries& s);

/// (1 + w)^exponent for a series w with w[0] == 0, via the standard
/// y'(1+w) = exponent * w' y coefficient recurrence.  Exact in the ring.
TruncSeries pow_one_plus(const TruncSeries& w, double exponent);

/// Lower/upper enclosure of the true series value at x in [0,1].
EvalInterval eval(const TruncSeries& s, double x);

double neumaier_sum(const std::vector<double>& xs);

}  // namespace gwcrit
