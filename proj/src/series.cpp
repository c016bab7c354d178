#include "gwcrit/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gwcrit/errors.hpp"

namespace gwcrit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double neumaier_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

TruncSeries::TruncSeries(std::vector<double> coeffs, double tail_mass, SeriesMode mode)
    : TruncSeries(std::move(coeffs), tail_mass, mode, 0) {
    tail_at_order_ = order() + 1;
}

TruncSeries::TruncSeries(std::vector<double> coeffs, double tail_mass, SeriesMode mode,
                         int tail_at_order)
    : coeffs_(std::move(coeffs)), tail_mass_(tail_mass), tail_at_order_(tail_at_order),
      mode_(mode) {
    if (coeffs_.empty()) throw invalid_order_error("TruncSeries: empty coefficient vector");
    if (mode_ == SeriesMode::pgf) {
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k] < 0.0) {
                throw invalid_family_error(k, "TruncSeries: negative coefficient in PGF mode at index " +
                                                  std::to_string(k));
            }
        }
    }
}

bool TruncSeries::tail_bounded() const { return std::isfinite(tail_mass_); }

TruncSeries TruncSeries::identity(int order) {
    if (order < 1) throw invalid_order_error("identity: order must be >= 1");
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[1] = 1.0;
    return TruncSeries(std::move(c), 0.0, SeriesMode::pgf);
}

TruncSeries TruncSeries::zero(int order) {
    if (order < 0) throw invalid_order_error("zero: order must be >= 0");
    return TruncSeries(std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0), 0.0,
                       SeriesMode::pgf);
}

double TruncSeries::sum() const { return neumaier_sum(coeffs_); }

double abs_binomial(double x, int k) {
    if (k < 0) return 0.0;
    double b = 1.0;
    for (int i = 0; i < k; ++i) {
        b *= std::abs(x - i) / (i + 1);
    }
    return b;
}

TruncSeries binomial_expand(double beta, int order) {
    if (order < 2) throw invalid_order_error("binomial_expand: order must be >= 2");
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    double b = 1.0;  // binom(beta, k)
    for (int k = 0; k <= order; ++k) {
        c[k] = (k % 2 == 0) ? b : -b;
        b *= (beta - k) / (k + 1);
    }
    // Sum_{k<=K} binom(beta,k)(-1)^k = binom(beta-1,K)(-1)^K, so once the signs
    // beyond K are fixed the absolute dropped mass is |binom(beta-1, K)|.
    double tail;
    if (beta > 0.0) {
        tail = abs_binomial(beta - 1.0, order);
    } else {
        tail = kInf;  // series diverges at s = 1
    }
    return TruncSeries(std::move(c), tail, SeriesMode::general);
}

TruncSeries multiply(const TruncSeries& a, const TruncSeries& b) {
    const int K = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<std::size_t>(K) + 1, 0.0);
    const bool nonneg = a.mode() == SeriesMode::pgf && b.mode() == SeriesMode::pgf;
    double cross = 0.0;  // exactly-known dropped mass (degree > K), nonneg case only
    for (int i = 0; i <= K; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (int j = 0; j <= K; ++j) {
            const double t = ai * b[j];
            if (i + j <= K) {
                c[i + j] += t;
            } else if (nonneg) {
                cross += t;
            }
        }
    }
    double tail;
    if (nonneg && a.tail_bounded() && b.tail_bounded()) {
        const double sa = a.sum(), sb = b.sum();
        tail = cross + a.tail_mass() * (sb + b.tail_mass()) + b.tail_mass() * sa;
    } else {
        tail = kInf;
    }
    return TruncSeries(std::move(c), tail, nonneg ? SeriesMode::pgf : SeriesMode::general, K + 1);
}

TruncSeries compose(const TruncSeries& outer, const TruncSeries& inner) {
    const int K = std::min(outer.order(), inner.order());
    if (outer.mode() == SeriesMode::pgf && inner.mode() == SeriesMode::pgf) {
        if (!(inner[0] >= 0.0 && inner[0] < 1.0)) {
            throw domain_error("compose: inner constant term must lie in [0,1) in PGF mode");
        }
    }
    // result = (((o_K * g + o_{K-1}) * g + ...) * g + o_0), all products mod s^{K+1}
    std::vector<double> res(static_cast<std::size_t>(K) + 1, 0.0);
    res[0] = outer[K];
    std::vector<double> next(static_cast<std::size_t>(K) + 1);
    for (int k = K - 1; k >= 0; --k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i <= K; ++i) {
            const double ri = res[i];
            if (ri == 0.0) continue;
            for (int j = 0; j + i <= K; ++j) {
                next[i + j] += ri * inner[j];
            }
        }
        next[0] += outer[k];
        res.swap(next);
    }
    const bool pgf = outer.mode() == SeriesMode::pgf && inner.mode() == SeriesMode::pgf;
    double tail = kInf;
    if (pgf) {
        // Retained coefficients are lower bounds of the true composition, whose
        // total mass is at most 1; the deficit can sit at any retained index.
        tail = std::max(0.0, 1.0 - neumaier_sum(res));
    }
    return TruncSeries(std::move(res), tail, pgf ? SeriesMode::pgf : SeriesMode::general, 0);
}

TruncSeries derivative(const TruncSeries& s) {
    if (s.order() < 1) throw invalid_order_error("derivative: order must be >= 1");
    std::vector<double> c(static_cast<std::size_t>(s.order()));
    for (int k = 1; k <= s.order(); ++k) {
        c[k - 1] = k * s[k];
    }
    const double tail = (s.tail_bounded() && s.tail_mass() == 0.0) ? 0.0 : kInf;
    return TruncSeries(std::move(c), tail, SeriesMode::general, s.order());
}

TruncSeries pow_one_plus(const TruncSeries& w, double exponent) {
    if (w[0] != 0.0) throw domain_error("pow_one_plus: w must have zero constant term");
    const int K = w.order();
    std::vector<double> y(static_cast<std::size_t>(K) + 1, 0.0);
    y[0] = 1.0;
    for (int j = 1; j <= K; ++j) {
        double acc = 0.0;
        for (int i = 1; i <= j; ++i) {
            acc += (exponent * i - (j - i)) * w[i] * y[j - i];
        }
        y[j] = acc / j;
    }
    return TruncSeries(std::move(y), kInf, SeriesMode::general, K + 1);
}

EvalInterval eval(const TruncSeries& s, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("eval: x must lie in [0,1]");
    // Horner from the top keeps the lower bound a faithful evaluation of the
    // retained polynomial.
    double lower = 0.0;
    for (int k = s.order(); k >= 0; --k) {
        lower = lower * x + s[k];
    }
    double upper;
    if (!s.tail_bounded()) {
        upper = std::numeric_limits<double>::infinity();
    } else {
        upper = lower + s.tail_mass() * std::pow(x, s.tail_at_order());
    }
    return {lower, upper};
}

}  // namespace gwcrit
