#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gwcrit/series.hpp"

namespace gwcrit {

enum class SVKind { constant, perturbed };

/// CLI / config-file family description: `family=stable nu=.. c=..` or
/// `family=perturbed nu=.. c=.. d=..`.
struct FamilySpec {
    SVKind kind = SVKind::constant;
    double nu = 0.5;
    double c = 0.5;
    double d = 0.0;

    std::string to_string() const;
    static FamilySpec parse(const std::string& text);
};

struct ValidationReport {
    std::vector<double> head;     // first `depth` coefficients
    double min_coeff = 0.0;
    std::size_t min_index = 0;
    double truncated_mass = 0.0;  // sum of the first `depth` coefficients
    double tail_bound = 0.0;      // analytic bound on the dropped mass
    double mean = 1.0;            // f'(1-), analytic
    bool critical = true;
    std::size_t depth = 0;
};

/// Slowly varying component L(x) of Lambda(y) = y^nu L(1/y), with its limit
/// C_L = L(infinity-) and the remainder-rate exponent.
struct SVFunction {
    SVKind kind;
    double nu, c, d;
    double operator()(double x) const;
    double limit() const { return c; }
    double remainder_exponent() const { return nu; }
};

/// A critical offspring law f(s) = s + (1-s)^{1+nu} L(1/(1-s)) with
///   ConstantL:  L == c,                  valid iff 0 < c <= 1/(1+nu)
///   PerturbedL: L(x) = c (1 + d x^-nu),  certified numerically at construction
///
/// Everything is closed form; the iteration-facing accessors work in survival
/// coordinates y = 1-s so that no 1-s cancellation ever occurs.
class OffspringFamily {
public:
    static OffspringFamily stable(double nu, double c);
    static OffspringFamily perturbed(double nu, double c, double d);
    static OffspringFamily from_spec(const FamilySpec& spec);

    const FamilySpec& spec() const { return spec_; }
    double nu() const { return spec_.nu; }
    double p0() const;
    double p1() const;

    double f(double s) const;
    double f_prime(double s) const;
    /// 1 - f'(1-y), computed directly (no cancellation near s = 1).
    double one_minus_f_prime_y(double y) const;
    /// Lambda(y) = (f(1-y) - (1-y)) / y = y^nu L(1/y), y in (0,1].
    double lambda_y(double y) const;
    /// One f-step in survival coordinates: r -> r (1 - Lambda(r)).
    double next_r(double r) const;

    SVFunction sv() const;
    double L(double x) const { return sv()(x); }
    double C_L() const { return spec_.c; }
    double alpha_lambda(double lam, double x) const;

    double J(double s) const { return J_y(1.0 - s); }
    double J_y(double y) const;
    double V(double s) const;
    double rho(double s) const;

    /// p_k by the magnitude-ratio recurrence; O(k) per call.
    double coeff(std::size_t k) const;
    std::vector<double> coeffs(std::size_t depth) const;
    /// Exact bound on sum_{k > K} p_k.
    double tail_mass_beyond(std::size_t K) const;
    /// The offspring PGF as a coefficient stream (PGF mode, analytic tail).
    TruncSeries pgf_series(int order) const;

    ValidationReport validate(std::size_t depth) const;

private:
    explicit OffspringFamily(FamilySpec spec);
    FamilySpec spec_;
};

/// Sequential p_k generator: O(1) per coefficient, stable to k ~ 1e9.
class CoeffStream {
public:
    explicit CoeffStream(const OffspringFamily& fam);
    std::size_t index() const { return k_; }
    double next();  // returns p_k and advances

private:
    FamilySpec spec_;
    std::size_t k_ = 0;
    double b1_ = 1.0;  // |binom(1+nu, k)| track
    double b2_ = 1.0;  // |binom(1+2nu, k)| track
};

}  // namespace gwcrit
