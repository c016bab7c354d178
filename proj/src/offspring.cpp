#include "gwcrit/offspring.hpp"

#include <cmath>
#include <sstream>

#include "gwcrit/errors.hpp"

namespace gwcrit {

std::string FamilySpec::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "family=" << (kind == SVKind::constant ? "stable" : "perturbed") << " nu=" << nu
       << " c=" << c;
    if (kind == SVKind::perturbed) os << " d=" << d;
    return os.str();
}

FamilySpec FamilySpec::parse(const std::string& text) {
    FamilySpec spec;
    bool have_family = false;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw domain_error("family spec: expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "family") {
            if (val == "stable") spec.kind = SVKind::constant;
            else if (val == "perturbed") spec.kind = SVKind::perturbed;
            else throw domain_error("family spec: unknown family '" + val + "'");
            have_family = true;
        } else if (key == "nu") {
            spec.nu = std::stod(val);
        } else if (key == "c") {
            spec.c = std::stod(val);
        } else if (key == "d") {
            spec.d = std::stod(val);
        } else {
            throw domain_error("family spec: unknown key '" + key + "'");
        }
    }
    if (!have_family) throw domain_error("family spec: missing family=stable|perturbed");
    return spec;
}

double SVFunction::operator()(double x) const {
    if (!(x >= 1.0)) throw domain_error("SVFunction: x must be >= 1");
    if (kind == SVKind::constant) return c;
    return c * (1.0 + d * std::pow(x, -nu));
}

OffspringFamily::OffspringFamily(FamilySpec spec) : spec_(spec) {
    if (!(spec_.nu > 0.0 && spec_.nu < 1.0)) throw domain_error("family: nu must lie in (0,1)");
    if (!(spec_.c > 0.0)) throw domain_error("family: c must be positive");
}

OffspringFamily OffspringFamily::stable(double nu, double c) {
    FamilySpec spec{SVKind::constant, nu, c, 0.0};
    OffspringFamily fam(spec);
    if (fam.p1() < 0.0) {
        throw invalid_family_error(1, "stable family requires c <= 1/(1+nu); p_1 = " +
                                          std::to_string(fam.p1()));
    }
    return fam;
}

OffspringFamily OffspringFamily::perturbed(double nu, double c, double d) {
    FamilySpec spec{SVKind::perturbed, nu, c, d};
    OffspringFamily fam(spec);
    // No general positivity criterion is available for perturbed L; certify this
    // instance numerically (depth 1e4) plus the dominant-term sign analysis for
    // the tail: p_k ~ c|binom(1+nu,k)| - cd|binom(1+2nu,k)|, and the magnitude
    // ratio of the second to the first term is decreasing in k.
    constexpr std::size_t kDepth = 10'000;
    CoeffStream stream(fam);
    for (std::size_t k = 0; k <= kDepth; ++k) {
        const double p = stream.next();
        if (p < -1e-15) {
            throw invalid_family_error(k, "perturbed family has negative coefficient p_" +
                                              std::to_string(k) + " = " + std::to_string(p));
        }
    }
    const double lead = c * abs_binomial(1.0 + nu, static_cast<int>(kDepth));
    const double pert = c * d * abs_binomial(1.0 + 2.0 * nu, static_cast<int>(kDepth));
    if (pert > lead) {
        throw invalid_family_error(kDepth, "perturbed family tail sign analysis failed");
    }
    return fam;
}

OffspringFamily OffspringFamily::from_spec(const FamilySpec& spec) {
    return spec.kind == SVKind::constant ? stable(spec.nu, spec.c)
                                         : perturbed(spec.nu, spec.c, spec.d);
}

double OffspringFamily::p0() const {
    return spec_.kind == SVKind::constant ? spec_.c : spec_.c * (1.0 + spec_.d);
}

double OffspringFamily::p1() const {
    double p = 1.0 - spec_.c * (1.0 + spec_.nu);
    if (spec_.kind == SVKind::perturbed) p -= spec_.c * spec_.d * (1.0 + 2.0 * spec_.nu);
    return p;
}

double OffspringFamily::lambda_y(double y) const {
    if (!(y > 0.0 && y <= 1.0)) throw domain_error("lambda_y: y must lie in (0,1]");
    double v = spec_.c * std::pow(y, spec_.nu);
    if (spec_.kind == SVKind::perturbed) v += spec_.c * spec_.d * std::pow(y, 2.0 * spec_.nu);
    return v;
}

double OffspringFamily::next_r(double r) const { return r * (1.0 - lambda_y(r)); }

double OffspringFamily::f(double s) const {
    if (!(s >= 0.0 && s <= 1.0)) throw domain_error("f: s must lie in [0,1]");
    if (s == 1.0) return 1.0;
    return 1.0 - next_r(1.0 - s);
}

double OffspringFamily::one_minus_f_prime_y(double y) const {
    double v = spec_.c * (1.0 + spec_.nu) * std::pow(y, spec_.nu);
    if (spec_.kind == SVKind::perturbed)
        v += spec_.c * spec_.d * (1.0 + 2.0 * spec_.nu) * std::pow(y, 2.0 * spec_.nu);
    return v;
}

double OffspringFamily::f_prime(double s) const {
    if (!(s >= 0.0 && s <= 1.0)) throw domain_error("f_prime: s must lie in [0,1]");
    return 1.0 - one_minus_f_prime_y(1.0 - s);
}

SVFunction OffspringFamily::sv() const { return SVFunction{spec_.kind, spec_.nu, spec_.c, spec_.d}; }

double OffspringFamily::alpha_lambda(double lam, double x) const {
    if (!(lam > 0.0)) throw domain_error("alpha_lambda: lambda must be positive");
    if (!(x >= 1.0)) throw domain_error("alpha_lambda: x must be >= 1");
    if (spec_.kind == SVKind::constant) return 0.0;
    const double u = spec_.d * std::pow(x, -spec_.nu);
    return u * (std::pow(lam, -spec_.nu) - 1.0) / (1.0 + u);
}

double OffspringFamily::J_y(double y) const {
    if (!(y > 0.0 && y <= 1.0)) throw domain_error("J: s must lie in [0,1)");
    return one_minus_f_prime_y(y) / lambda_y(y) - 1.0;
}

double OffspringFamily::V(double s) const {
    if (!(s >= 0.0 && s < 1.0)) throw domain_error("V: s must lie in [0,1) (pole at s=1)");
    return 1.0 / (spec_.nu * lambda_y(1.0 - s));
}

double OffspringFamily::rho(double s) const { return std::abs(spec_.nu - J(s)); }

double OffspringFamily::coeff(std::size_t k) const {
    const double nu = spec_.nu, c = spec_.c, d = spec_.d;
    if (k == 0) return p0();
    if (k == 1) return p1();
    double v = c * abs_binomial(1.0 + nu, static_cast<int>(k));
    if (spec_.kind == SVKind::perturbed) {
        // (1-s)^{1+2nu}: coefficient sign is (-1)^k binom(1+2nu,k); positive for
        // k >= 2 when 1+2nu < 2, negative for k >= 3 when 1+2nu > 2.
        double sign = 1.0;
        if (2.0 * nu > 1.0 && k >= 3) sign = -1.0;
        v += sign * c * d * abs_binomial(1.0 + 2.0 * nu, static_cast<int>(k));
    }
    return v;
}

std::vector<double> OffspringFamily::coeffs(std::size_t depth) const {
    std::vector<double> out(depth);
    CoeffStream stream(*this);
    for (std::size_t k = 0; k < depth; ++k) out[k] = stream.next();
    return out;
}

namespace {
// |binom(x,K)| = x Gamma(K-x) / (Gamma(1-x) Gamma(K+1)) for 0 < x < 1; the
// lgamma route avoids the O(K) ratio loop for huge K (support caps).
double abs_binomial_any(double x, std::size_t K) {
    if (K <= 1'000'000) return abs_binomial(x, static_cast<int>(K));
    const double k = static_cast<double>(K);
    return std::abs(x) *
           std::exp(std::lgamma(k - x) - std::lgamma(k + 1.0) - std::lgamma(1.0 - x));
}
}  // namespace

double OffspringFamily::tail_mass_beyond(std::size_t K) const {
    // sum_{k>K} |binom(1+nu,k)| = |binom(nu,K)| (telescoping partial-sum identity)
    double tail = spec_.c * abs_binomial_any(spec_.nu, K);
    if (spec_.kind == SVKind::perturbed) {
        tail += spec_.c * spec_.d * abs_binomial_any(2.0 * spec_.nu, K);
    }
    return tail;
}

TruncSeries OffspringFamily::pgf_series(int order) const {
    if (order < 2) throw invalid_order_error("pgf_series: order must be >= 2");
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    CoeffStream stream(*this);
    for (int k = 0; k <= order; ++k) c[k] = stream.next();
    return TruncSeries(std::move(c), tail_mass_beyond(static_cast<std::size_t>(order)),
                       SeriesMode::pgf);
}

ValidationReport OffspringFamily::validate(std::size_t depth) const {
    if (depth < 2) throw invalid_order_error("validate: depth must be >= 2");
    ValidationReport rep;
    rep.depth = depth;
    rep.head.reserve(depth);
    rep.min_coeff = 1.0;
    CoeffStream stream(*this);
    std::vector<double> all(depth);
    for (std::size_t k = 0; k < depth; ++k) {
        const double p = stream.next();
        all[k] = p;
        if (p < rep.min_coeff) {
            rep.min_coeff = p;
            rep.min_index = k;
        }
        if (p < -1e-15) {
            throw invalid_family_error(k, "offspring coefficient p_" + std::to_string(k) +
                                              " = " + std::to_string(p) + " is negative");
        }
    }
    rep.head = all;
    rep.truncated_mass = neumaier_sum(all);
    rep.tail_bound = tail_mass_beyond(depth - 1);
    rep.mean = 1.0;  // f'(1-) = 1 by construction for every family in [f_nu]
    rep.critical = true;
    return rep;
}

CoeffStream::CoeffStream(const OffspringFamily& fam) : spec_(fam.spec()) {}

double CoeffStream::next() {
    const double nu = spec_.nu, c = spec_.c, d = spec_.d;
    const std::size_t k = k_++;
    if (k == 0) return spec_.kind == SVKind::constant ? c : c * (1.0 + d);
    if (k == 1) {
        b1_ = 1.0 + nu;       // |binom(1+nu, 1)|
        b2_ = 1.0 + 2.0 * nu;
        double p = 1.0 - c * (1.0 + nu);
        if (spec_.kind == SVKind::perturbed) p -= c * d * (1.0 + 2.0 * nu);
        return p;
    }
    // |binom(x, k)| ratio: |x - (k-1)| / k
    const double km1 = static_cast<double>(k - 1);
    b1_ *= std::abs(1.0 + nu - km1) / static_cast<double>(k);
    b2_ *= std::abs(1.0 + 2.0 * nu - km1) / static_cast<double>(k);
    double p = c * b1_;
    if (spec_.kind == SVKind::perturbed) {
        double sign = 1.0;
        if (2.0 * nu > 1.0 && k >= 3) sign = -1.0;
        p += sign * c * d * b2_;
    }
    return p;
}

}  // namespace gwcrit
