#include <cmath>

#include <doctest.h>

#include "gwcrit/errors.hpp"
#include "gwcrit/offspring.hpp"

using namespace gwcrit;

namespace {
const OffspringFamily& famA() {
    static const OffspringFamily A = OffspringFamily::stable(0.5, 0.5);
    return A;
}
const OffspringFamily& famB() {
    static const OffspringFamily B = OffspringFamily::perturbed(0.5, 0.4, 0.2);
    return B;
}

double lambda_prime_fd(const OffspringFamily& fam, double y) {
    const double h = y * 1e-6;
    return (fam.lambda_y(y + h) - fam.lambda_y(y - h)) / (2.0 * h);
}
}

TEST_CASE("validate_family reproduces the coefficient oracles") {
    const ValidationReport ra = famA().validate(4);
    CHECK(ra.head[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ra.head[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ra.head[2] == doctest::Approx(0.5 * 0.375).epsilon(1e-14));    // c |binom(1.5,2)|
    CHECK(ra.head[3] == doctest::Approx(0.03125).epsilon(1e-13));        // c |binom(1.5,3)|

    const ValidationReport rb = famB().validate(3);
    CHECK(rb.head[0] == doctest::Approx(0.48).epsilon(1e-15));
    CHECK(rb.head[1] == doctest::Approx(0.24).epsilon(1e-14));
    CHECK(rb.head[2] == doctest::Approx(0.23).epsilon(1e-14));  // 0.4*0.375 + 0.08

    CHECK_THROWS_AS(OffspringFamily::stable(0.5, 0.8), invalid_family_error);
    try {
        OffspringFamily::stable(0.5, 0.8);
    } catch (const invalid_family_error& e) {
        CHECK(e.index() == 1);
    }
}

TEST_CASE("validate_family mass bracket and depth sweep") {
    for (const OffspringFamily* fam : {&famA(), &famB()}) {
        const ValidationReport rep = fam->validate(10'000);
        CHECK(rep.min_coeff >= 0.0);
        CHECK(rep.truncated_mass + rep.tail_bound == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(rep.truncated_mass + rep.tail_bound - 1.0) <= 1e-10);
        CHECK(rep.mean == 1.0);
        CHECK(rep.critical);
    }
}

TEST_CASE("f_eval values") {
    CHECK(famA().f(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(famA().f(0.5) == doctest::Approx(0.5 + 0.5 * std::pow(0.5, 1.5)).epsilon(1e-15));
    CHECK(famA().f(1.0) == 1.0);
    CHECK(famB().f(0.0) == doctest::Approx(0.48).epsilon(1e-15));
    CHECK_THROWS_AS(famA().f(1.5), gwcrit::domain_error);
    // strictly increasing, f(s) in [s, 1]
    double prev = famA().f(0.0);
    for (int i = 1; i <= 20; ++i) {
        const double s = i / 20.0;
        const double v = famA().f(s);
        CHECK(v >= s);
        CHECK(v <= 1.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("Lambda values and the defining identity") {
    CHECK(famA().lambda_y(1.0) == doctest::Approx(0.5).epsilon(1e-15));  // Lambda(1) = p_0
    CHECK(famA().lambda_y(0.5) == doctest::Approx(0.5 * std::sqrt(0.5)).epsilon(1e-15));
    CHECK(famB().lambda_y(1.0) == doctest::Approx(0.48).epsilon(1e-15));
    CHECK_THROWS_AS(famA().lambda_y(0.0), gwcrit::domain_error);

    // f(s) - s = (1-s) Lambda(1-s) against the direct-power route, 1e-13 relative
    for (const OffspringFamily* fam : {&famA(), &famB()}) {
        const FamilySpec& sp = fam->spec();
        for (int i = 1; i <= 99; ++i) {
            const double s = i / 100.0;
            double direct = sp.c * std::pow(1.0 - s, 1.0 + sp.nu);
            if (sp.kind == SVKind::perturbed) {
                direct += sp.c * sp.d * std::pow(1.0 - s, 1.0 + 2.0 * sp.nu);
            }
            const double viaLambda = (1.0 - s) * fam->lambda_y(1.0 - s);
            CHECK(viaLambda == doctest::Approx(direct).epsilon(1e-13));
            CHECK(fam->f(s) - s == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("J, V, rho closed-form values") {
    // constant-L family: J == nu identically
    for (double s : {0.0, 0.3, 0.9, 1.0 - 1e-6, 1.0 - 1e-10}) {
        CHECK(std::abs(famA().J(s) - 0.5) <= 1e-14);
        CHECK(famA().rho(s) <= 1e-14);
    }
    CHECK(famB().J(0.0) == doctest::Approx(0.76 / 0.48 - 1.0).epsilon(1e-13));
    CHECK(std::abs(famB().J(1.0 - 1e-10) - 0.5) <= 1e-6);
    CHECK(famB().rho(0.0) == doctest::Approx(0.76 / 0.48 - 1.5).epsilon(1e-11));

    CHECK(famA().V(0.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(famA().V(0.5) == doctest::Approx(4.0 / std::sqrt(0.5)).epsilon(1e-14));
    CHECK(famB().V(0.0) == doctest::Approx(1.0 / 0.24).epsilon(1e-14));
    CHECK_THROWS_AS(famA().V(1.0), gwcrit::domain_error);
    // V increasing toward the pole
    CHECK(famA().V(0.9) > famA().V(0.5));

    // family B: rho(s)/(1-s)^nu approaches 0.04/0.4 = 0.1
    const double y = 1e-6;
    CHECK(famB().rho(1.0 - y) / std::sqrt(y) == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("alpha_lambda remainder") {
    CHECK(famA().alpha_lambda(2.0, 100.0) == 0.0);
    CHECK(famA().alpha_lambda(0.5, 1e6) == 0.0);
    // direct formula: d x^-nu (lam^-nu - 1) / (1 + d x^-nu)
    const double expected = 0.2 * 0.1 * (std::pow(2.0, -0.5) - 1.0) / 1.02;
    CHECK(famB().alpha_lambda(2.0, 100.0) == doctest::Approx(expected).epsilon(1e-13));
    // |alpha_2(x)| sqrt(x) bounded over x in 1e2..1e8
    double sup = 0.0;
    for (double x = 1e2; x <= 1e8; x *= 10.0) {
        sup = std::max(sup, std::abs(famB().alpha_lambda(2.0, x)) * std::sqrt(x));
    }
    CHECK(sup < 0.1);
    CHECK(sup > 0.0);
}

TEST_CASE("slowly varying function: ratio limit and remainder bound") {
    const SVFunction LB = famB().sv();
    for (double lam : {0.5, 2.0, 7.0}) {
        CHECK(LB(lam * 1e9) / LB(1e9) == doctest::Approx(1.0).epsilon(1e-4));
    }
    // |L(x) - C_L| x^nu bounded with C_L = c
    CHECK(LB.limit() == 0.4);
    double sup = 0.0;
    for (double x = 10.0; x <= 1e8; x *= 3.0) {
        sup = std::max(sup, std::abs(LB(x) - 0.4) * std::sqrt(x));
    }
    CHECK(sup <= 0.08 + 1e-12);  // analytic: c*d = 0.08
}

TEST_CASE("1-f' = Lambda + y Lambda' identity with finite-difference Lambda'") {
    for (const OffspringFamily* fam : {&famA(), &famB()}) {
        for (int i = 1; i <= 9; ++i) {
            const double s = i / 10.0;
            const double y = 1.0 - s;
            const double lhs = fam->one_minus_f_prime_y(y);
            const double rhs = fam->lambda_y(y) + y * lambda_prime_fd(*fam, y);
            CHECK(rhs == doctest::Approx(lhs).epsilon(1e-6));
        }
    }
}

TEST_CASE("Karamata ratio y Lambda'(y)/Lambda(y) -> nu") {
    for (const OffspringFamily* fam : {&famA(), &famB()}) {
        const double y = 1e-8;
        const double ratio = y * lambda_prime_fd(*fam, y) / fam->lambda_y(y);
        CHECK(std::abs(ratio - 0.5) <= 1e-4);
    }
}

TEST_CASE("coefficient tail: p_k k^{2+nu} bounded and eventually monotone") {
    CoeffStream stream(famA());
    double prev_scaled = 0.0;
    double min_scaled = 1e300, max_scaled = 0.0;
    bool monotone_after_1e3 = true;  // decreasing toward the limit from above
    for (std::size_t k = 0; k <= 100'000; ++k) {
        const double p = stream.next();
        if (k < 1000) continue;
        const double scaled = p * std::pow(static_cast<double>(k), 2.5);
        if (k > 1000 && scaled > prev_scaled * (1.0 + 1e-12)) monotone_after_1e3 = false;
        prev_scaled = scaled;
        min_scaled = std::min(min_scaled, scaled);
        max_scaled = std::max(max_scaled, scaled);
    }
    CHECK(monotone_after_1e3);
    CHECK(max_scaled < 1.0);
    CHECK(min_scaled > 0.1);
    // limit c / |Gamma(-1.5)| = 0.5 / (4 sqrt(pi) / 3)
    const double limit = 0.5 * 3.0 / (4.0 * std::sqrt(M_PI));
    CHECK(prev_scaled == doctest::Approx(limit).epsilon(1e-3));
}

TEST_CASE("randomized families satisfy the structural invariants") {
    std::mt19937_64 rng(7771);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int built = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const double nu = 0.15 + 0.7 * unif(rng);
        const double c = (0.2 + 0.75 * unif(rng)) / (1.0 + nu);
        const double d = 0.3 * unif(rng);
        const bool perturbed = trial % 2 == 1;
        OffspringFamily fam = famA();
        try {
            fam = perturbed ? OffspringFamily::perturbed(nu, c, d)
                            : OffspringFamily::stable(nu, c);
        } catch (const invalid_family_error&) {
            continue;  // this (nu, c, d) corner is not a PGF; skip
        }
        ++built;
        const ValidationReport rep = fam.validate(2000);
        CHECK(rep.min_coeff >= -1e-15);
        CHECK(rep.truncated_mass + rep.tail_bound == doctest::Approx(1.0).epsilon(1e-11));
        for (int i = 1; i <= 9; ++i) {
            const double s = i / 10.0;
            double direct = c * std::pow(1.0 - s, 1.0 + nu);
            if (perturbed) direct += c * d * std::pow(1.0 - s, 1.0 + 2.0 * nu);
            CHECK((1.0 - s) * fam.lambda_y(1.0 - s) == doctest::Approx(direct).epsilon(1e-12));
        }
        // J(s) - nu = d nu (1-s)^nu / (1 + d (1-s)^nu): exact remainder bound
        const double y = 1e-8;
        const double bound = perturbed ? 1.01 * d * nu * std::pow(y, nu) + 1e-12 : 1e-13;
        CHECK(std::abs(fam.J_y(y) - nu) <= bound);
        // series iterate keeps nonnegativity and the mass bracket
        const TruncSeries f20 = iterate_series(fam, 20, 32);
        for (int k = 0; k <= f20.order(); ++k) CHECK(f20[k] >= 0.0);
        CHECK(f20.sum() <= 1.0);
        CHECK(f20.sum() + f20.tail_mass() >= 1.0);
        // psi bracket at a midpoint, first twenty iterates
        const double s0 = 0.3, y0 = 0.7;
        const double fps = 1.0 - fam.one_minus_f_prime_y(y0);
        scan_iterates(fam, s0, 20, true, [&](const ScanPoint& pt) {
            const double psi =
                pt.fprod_s * y0 * fam.lambda_y(y0) / (pt.r_s * fam.lambda_y(pt.r_s));
            CHECK(psi <= 1.0 + 1e-12);
            CHECK(psi >= fps / (1.0 - fam.one_minus_f_prime_y(pt.r_s)) - 1e-12);
        });
    }
    CHECK(built >= 30);
}

TEST_CASE("family spec grammar round-trip") {
    const FamilySpec a = FamilySpec::parse("family=stable nu=0.5 c=0.5");
    CHECK(a.kind == SVKind::constant);
    CHECK(a.nu == 0.5);
    const FamilySpec b = FamilySpec::parse(famB().spec().to_string());
    CHECK(b.kind == SVKind::perturbed);
    CHECK(b.d == 0.2);
    CHECK_THROWS_AS(FamilySpec::parse("family=weird nu=0.5"), gwcrit::domain_error);
    CHECK_THROWS_AS(FamilySpec::parse("nu=0.5 c=0.5"), gwcrit::domain_error);
}
