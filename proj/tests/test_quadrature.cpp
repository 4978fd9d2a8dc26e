#include <catch2/catch_amalgamated.hpp>

#include "specurve/contour.hpp"
#include "specurve/mp.hpp"
#include "specurve/quadrature.hpp"

#include <random>

using namespace specurve;

TEST_CASE("weighted integral: Gaussian normalization") {
    PrecisionConfig cfg = double_config();
    Poly<double> w{0.0, 0.0, 0.5}; // x^2/2
    double v = integrate_weighted([](double) { return 1.0; }, w, 1.0, cfg);
    REQUIRE(v == Catch::Approx(std::sqrt(2 * M_PI)).epsilon(1e-10));
}

TEST_CASE("weighted integral: shifted Gaussian first moment") {
    // weight exponent x^2/2 - x completes to the unit Gaussian centered at 1
    PrecisionConfig cfg = double_config();
    Poly<double> w{0.0, -1.0, 0.5};
    double v = integrate_weighted([](double x) { return x; }, w, 1.0, cfg);
    REQUIRE(v == Catch::Approx(std::sqrt(2 * M_PI) * std::exp(0.5)).epsilon(1e-10));
}

TEST_CASE("weighted integral: quartic cross-check at doubled resolution") {
    PrecisionConfig cfg = double_config();
    Poly<double> w{0.0, 0.0, 0.0, 0.0, 0.25}; // x^4/4
    auto f = [](double x) { return x * x; };
    double v1 = integrate_weighted(f, w, 1.0, cfg);
    PrecisionConfig finer = cfg;
    finer.quad_rel_tol = cfg.quad_rel_tol / 100;
    double v2 = integrate_weighted(f, w, 1.0, finer);
    REQUIRE(std::abs(v1 - v2) <= cfg.quad_rel_tol * std::abs(v2) * 10);
}

TEST_CASE("weighted integral rejects odd exponents") {
    PrecisionConfig cfg = double_config();
    Poly<double> w{0.0, 0.0, 0.0, 1.0};
    REQUIRE_THROWS_AS(integrate_weighted([](double) { return 1.0; }, w, 1.0, cfg),
                      std::invalid_argument);
}

TEST_CASE("quadrature consistency under node doubling (property)") {
    PrecisionConfig cfg = double_config();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int t = 0; t < 6; ++t) {
        std::vector<double> pc(5);
        for (auto& c : pc) c = uni(rng);
        Poly<double> integrand(pc);
        Poly<double> w{0.0, uni(rng), 0.5};
        double v1 = integrate_weighted([&](double x) { return integrand(x); }, w, 1.0, cfg);
        PrecisionConfig finer = cfg;
        finer.quad_rel_tol = cfg.quad_rel_tol / 4;
        double v2 = integrate_weighted([&](double x) { return integrand(x); }, w, 1.0, finer);
        REQUIRE(std::abs(v1 - v2) <= cfg.quad_rel_tol * (std::abs(v1) + 1e-6));
    }
}

TEST_CASE("moment table matches one-off integrals") {
    PrecisionGuard guard(50);
    PrecisionConfig cfg;
    cfg.working_digits = 50;
    Poly<mp_real> w{mp_real(0), mp_real(-1) / 2, mp_real(0), mp_real(0), mp_real(1) / 4};
    WeightMomentTable<mp_real> table(w, mp_real(2), 8, cfg);
    for (int s : {0, 3, 8}) {
        mp_real direct = integrate_weighted(
            [&](const mp_real& x) { return pow(x, s); }, w, mp_real(2), cfg);
        REQUIRE(static_cast<double>(abs(table[static_cast<std::size_t>(s)] - direct)) < 1e-40);
    }
}

TEST_CASE("contour integral: residue of 1/z") {
    PrecisionConfig cfg = double_config();
    auto v = circle_integral([](const Cx<double>& z) { return Cx<double>(1.0) / z; },
                             Cx<double>(0.0), 1.0, cfg);
    REQUIRE(v.re == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(v.im == Catch::Approx(2 * M_PI).epsilon(1e-12));
}

TEST_CASE("contour integral: entire integrand vanishes on closed polylines") {
    PrecisionConfig cfg = double_config();
    std::vector<Cx<double>> path = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 1}};
    auto v = polyline_integral([](const Cx<double>& z) { return z; }, path, cfg);
    REQUIRE(abs(v) < 1e-12);
    REQUIRE_THROWS_AS(
        polyline_integral([](const Cx<double>& z) { return z; },
                          std::vector<Cx<double>>{{0, 0}, {1, 0}}, cfg),
        ContractViolation);
}

TEST_CASE("contour integral: simple pole residue from an independent factorization") {
    // g = P/Q with Q = (z - 1/2)(z - 3), pole at 1/2 inside the unit circle;
    // residue = P(1/2) / (1/2 - 3)
    PrecisionConfig cfg = double_config();
    auto P = [](const Cx<double>& z) { return z * z + Cx<double>(2.0); };
    auto g = [&](const Cx<double>& z) {
        return P(z) / ((z - Cx<double>(0.5)) * (z - Cx<double>(3.0)));
    };
    auto v = circle_integral(g, Cx<double>(0.0), 1.0, cfg);
    double expected = (0.25 + 2.0) / (0.5 - 3.0);
    REQUIRE(v.im == Catch::Approx(2 * M_PI * expected).epsilon(1e-10));
    REQUIRE(std::abs(v.re) < 1e-10);
}
