#include <catch2/catch_amalgamated.hpp>

#include "specurve/mp.hpp"
#include "specurve/poly.hpp"
#include "specurve/roots.hpp"

#include <random>

using namespace specurve;

TEST_CASE("polynomial basics") {
    Poly<double> p{1.0, 0.0, 1.0}; // 1 + z^2
    REQUIRE(p.degree() == 2);
    REQUIRE(p(2.0) == Catch::Approx(5.0));
    Poly<double> d = p.derivative();
    REQUIRE(d.degree() == 1);
    REQUIRE(d(3.0) == Catch::Approx(6.0));
    Poly<double> q = p * p;
    REQUIRE(q.degree() == 4);
    REQUIRE(q(1.5) == Catch::Approx(p(1.5) * p(1.5)));
    REQUIRE(p.reflected()(1.0) == Catch::Approx(p(-1.0)));
}

TEST_CASE("roots of z^2 + 1 are the conjugate pair +-i") {
    Poly<double> p{1.0, 0.0, 1.0};
    auto r = roots_conjugate_paired(p, 1e-12);
    REQUIRE(r.size() == 2);
    REQUIRE(std::abs(r[0].re) < 1e-12);
    REQUIRE(std::abs(std::abs(r[0].im) - 1.0) < 1e-12);
    // exact pairing, bit for bit
    REQUIRE(r[0].re == r[1].re);
    REQUIRE(r[0].im == -r[1].im);
}

TEST_CASE("z^3 yields a triple cluster at 0") {
    Poly<double> p{0.0, 0.0, 0.0, 1.0};
    auto cl = roots_with_multiplicity(p, 1e-11);
    REQUIRE(cl.size() == 1);
    REQUIRE(cl[0].multiplicity == 3);
    REQUIRE(abs(cl[0].location) < 1e-4);
}

TEST_CASE("Gaussian-source discriminant at a=1 has a double zero at 0") {
    // disc = 4 z^4 - 27 z^2, expanded symbolically from the cubic at a = 1
    Poly<double> disc{0.0, 0.0, -27.0, 0.0, 4.0};
    auto cl = roots_with_multiplicity(disc, 1e-11);
    int at_zero_mult = 0;
    int real_count = 0;
    for (const auto& c : cl) {
        if (abs(c.location) < 1e-5) at_zero_mult = c.multiplicity;
        if (c.location.im == 0) ++real_count;
    }
    REQUIRE(at_zero_mult >= 2);
    // +- 3 sqrt(3) / 2 plus the origin cluster
    bool found = false;
    for (const auto& c : cl)
        if (std::abs(c.location.re - 3.0 * std::sqrt(3.0) / 2.0) < 1e-7) found = true;
    REQUIRE(found);
}

TEST_CASE("random real polynomials: conjugation symmetry of the root multiset") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<double> c(7);
        for (auto& v : c) v = uni(rng);
        c.back() = 1.0;
        Poly<double> p(c);
        auto r = roots_conjugate_paired(p, 1e-11);
        REQUIRE(r.size() == 6);
        for (const auto& z : r) {
            if (z.im == 0) continue;
            bool partner = false;
            for (const auto& w : r)
                if (w.re == z.re && w.im == -z.im) partner = true;
            REQUIRE(partner);
        }
        // residuals within tolerance
        for (const auto& z : r) {
            Cx<double> f(0);
            for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
                f = f * z + Cx<double>(*it);
            double scale = p.max_abs_coeff() * std::pow(std::max(1.0, abs(z)), p.degree());
            REQUIRE(abs(f) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("multiprecision roots refine with working digits") {
    PrecisionGuard guard(60);
    Poly<mp_real> p{mp_real(-2), mp_real(0), mp_real(1)}; // z^2 - 2
    auto r = roots_conjugate_paired(p, mp_real("1e-50"));
    REQUIRE(r.size() == 2);
    mp_real best(1);
    for (const auto& z : r) best = std::min(best, abs(abs(z.re) - sqrt(mp_real(2))));
    REQUIRE(best < mp_real("1e-45"));
}
