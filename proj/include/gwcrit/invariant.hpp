#pragma once

#include <cstdint>
#include <vector>

#include "gwcrit/offspring.hpp"

namespace gwcrit {

/// Explicit invariant-measure GF: U(s) = V(s) - V(0).
double U_of(const OffspringFamily& fam, double s);

/// U'(s) = J(s) V(s) / (1-s).
double U_prime_of(const OffspringFamily& fam, double s);

/// u_1 = (1 - p_0 - p_1) / (nu p_0^2).
double u1_of(const OffspringFamily& fam);

/// Power-series coefficients of V(s) - V(0) around 0 via binomial machinery;
/// returns u[0..J] with u[0] = 0.
std::vector<double> u_coeffs_analytic(const OffspringFamily& fam, int J, int order);

struct EmpiricalCoeffs {
    std::vector<std::uint64_t> n_grid;       // factor-2 geometric, ascending
    std::vector<std::vector<double>> u;      // u[i][j-1] = u_j(n_grid[i]), j = 1..J
    double u1_extrapolated = 0.0;            // two-point Richardson in 1/n
    double u1_error_bar = 0.0;               // next grid increment
};

/// u_j(n) = p_j(n) / (f_{n+1}(0) - f_n(0)) on a log-spaced grid up to n_max.
EmpiricalCoeffs u_coeffs_empirical(const OffspringFamily& fam, int J, std::uint64_t n_max,
                                   int order);

struct AbelResidual {
    double lhs_lambda;     // 1/Lambda(R_n(s)) - 1/Lambda(1-s)
    double gf_form;        // U(f_n(s)) - U(s) - n  (= lhs_lambda/nu - n)
    double lambda_form;    // lhs_lambda - nu n
    double normalized_log; // lambda_form / ln(Lambda(1-s) nu n + 1); -> (1+nu)/2
};

AbelResidual abel_residual(const OffspringFamily& fam, double s, std::uint64_t n);

struct IntegralFormResult {
    double integral;               // quadrature of U'(y) over [0,s]
    double difference;             // |integral - U_of(s)|
    double max_bracket_violation;  // sup over nodes of psi(y) outside [f'(y), 1]
    bool bracket_ok;
};

/// Integral-form cross-check: integrates psi(y)/((1-y)Lambda(1-y)) with
/// psi(y) = J(y)/nu by adaptive quadrature and compares against U_of.
/// Violations of the bracket f'(y) <= psi(y) <= 1 are reported, not asserted.
IntegralFormResult integral_form_check(const OffspringFamily& fam, double s, double tol = 1e-10);

/// r_j = u_j - sum_{k<=J} u_k P_kj(1), j = 1..jmax (index 0 unused).
std::vector<double> stationarity_residuals(const OffspringFamily& fam, int jmax, int J);

struct NormalizationTrace {
    std::vector<int> J;
    std::vector<double> partial;  // sum_{k<=J} u_k p0^k
    double value = 0.0;           // at the largest J
};

NormalizationTrace normalization_sum(const OffspringFamily& fam, int Jmax);

}  // namespace gwcrit
