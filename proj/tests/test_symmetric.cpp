#include <catch2/catch_amalgamated.hpp>

#include "specurve/symmetric.hpp"

using namespace specurve;

namespace {
const PrecisionConfig cfg = double_config();
}

TEST_CASE("parity certificate") {
    REQUIRE(check_symmetry(pastur_curve(0.5)).is_symmetric);
    SpectralCurve c = pastur_curve(0.5);
    c.p0 = c.p0 + Poly<double>{0.01}; // constant shift breaks parity
    auto cert = check_symmetry(c);
    REQUIRE_FALSE(cert.is_symmetric);
    bool flagged = false;
    for (double r : cert.residuals)
        if (r > 1e-3) flagged = true;
    REQUIRE(flagged);
    // quartic even V: p0 symmetric iff the completion is odd
    Potential<double> quartic({0.0, 0.5, 0.0, 1.0});
    SpectralCurve q;
    q.V = quartic;
    q.a = 1.0;
    q.alpha = 0.5;
    q.p1 = Poly<double>{0.3, 0.0, 1.0};
    q.p0 = Poly<double>{0.0, 0.2, 0.0, 1.0};
    REQUIRE(check_symmetry(q).is_symmetric);
    q.p0 = Poly<double>{0.0, 0.2, 0.05, 1.0};
    REQUIRE_FALSE(check_symmetry(q).is_symmetric);
}

TEST_CASE("constrained pair in the saturated case a = 1/2") {
    SpectralCurve c = pastur_curve(0.5);
    RegimeReport reg = classify_regime(c, cfg);
    GammaStar gs = build_gamma_star(c, reg, cfg);
    VectorCriticalMeasure vcm = extract_measures(c, reg, &gs, cfg, 900);
    ConstrainedPair pair = build_constrained_pair(c, reg, vcm, cfg);

    REQUIRE(pair.y_star == Catch::Approx(0.5899798397854930).epsilon(1e-8));
    REQUIRE(pair.sigma_level == Catch::Approx(0.5 / M_PI));
    // nu2 = sigma on the saturated segment by construction
    REQUIRE(pair.rho.front() == Catch::Approx(pair.sigma_level));
    // strictly below sigma outside
    for (int k = 1; k <= 20; ++k) {
        double y = pair.y_star + 0.11 * k;
        REQUIRE(pair.density_at(y) < pair.sigma_level);
        REQUIRE(pair.density_at(y) > 0);
    }
    REQUIRE(pair.mass_nu1 == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(pair.mass_nu2 == Catch::Approx(0.5).margin(1e-6));
    // parity of the nu2 samples is built in; nu1 density even in x
    for (double x : {0.4, 1.3, 2.0})
        REQUIRE(density(c, x) == Catch::Approx(density(c, -x)).margin(1e-12));
}

TEST_CASE("constrained pair in the unsaturated case a = 2") {
    SpectralCurve c = pastur_curve(2.0);
    RegimeReport reg = classify_regime(c, cfg);
    GammaStar gs = build_gamma_star(c, reg, cfg);
    VectorCriticalMeasure vcm = extract_measures(c, reg, &gs, cfg, 900);
    ConstrainedPair pair = build_constrained_pair(c, reg, vcm, cfg);
    REQUIRE(pair.y_star == 0.0);
    for (double y : {0.01, 0.4, 1.0, 3.0, 9.0})
        REQUIRE(pair.density_at(y) < pair.sigma_level);
    REQUIRE(pair.mass_nu2 == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("theorem-C identities in potential form (saturated)") {
    SpectralCurve c = pastur_curve(0.5);
    RegimeReport reg = classify_regime(c, cfg);
    GammaStar gs = build_gamma_star(c, reg, cfg);
    VectorCriticalMeasure vcm = extract_measures(c, reg, &gs, cfg, 1400);
    ConstrainedPair pair = build_constrained_pair(c, reg, vcm, cfg);
    auto rep = verify_theorem_c(c, pair, vcm, &gs, cfg);
    REQUIRE(rep.equality_max < 1e-5);
    REQUIRE(rep.inequality_slack > 1e-3); // strict at i y*/2
    REQUIRE(rep.balayage_max < 1e-4);
    REQUIRE(rep.h_continuity_max < 1e-5);
}

TEST_CASE("theorem-C equality covers the whole axis when unsaturated") {
    SpectralCurve c = pastur_curve(2.0);
    RegimeReport reg = classify_regime(c, cfg);
    GammaStar gs = build_gamma_star(c, reg, cfg);
    VectorCriticalMeasure vcm = extract_measures(c, reg, &gs, cfg, 1400);
    ConstrainedPair pair = build_constrained_pair(c, reg, vcm, cfg);
    auto rep = verify_theorem_c(c, pair, vcm, &gs, cfg);
    REQUIRE(rep.equality_max < 1e-5);
    REQUIRE(rep.balayage_max < 1e-4);
}

TEST_CASE("non-symmetric input is rejected") {
    SpectralCurve c = pastur_curve(0.5);
    c.p0 = c.p0 + Poly<double>{0.05};
    RegimeReport reg;
    VectorCriticalMeasure vcm;
    REQUIRE_THROWS_AS(build_constrained_pair(c, reg, vcm, cfg), ContractViolation);
}
