#include <catch2/catch_amalgamated.hpp>

#include "specurve/curve.hpp"

using namespace specurve;

namespace {
const PrecisionConfig cfg = double_config();

// discriminant t-roots (t = z^2) of the Gaussian-source curve, frozen from
// the quadratic 16 a^2 t^2 + [(1-a^2)^2 - 18 a^2 (1-a^2) - 27 a^4] t - 4 (1-a^2)^3
constexpr double kYStarHalf = 0.5899798397854929587468245;  // a = 1/2
constexpr double kRealBpHalf = 2.201834737520805838076832;  // a = 1/2
constexpr double kBpOne = 2.59807621135331594029117;        // a = 1, = 3 sqrt(3)/2
constexpr double kBpTwoInner = 0.7380174596563809915899435; // a = 2
constexpr double kBpTwoOuter = 3.520345186092173838810369;  // a = 2
} // namespace

TEST_CASE("Pastur curve satisfies the coefficient normalization") {
    for (double a : {0.5, 1.0, 2.0}) {
        SpectralCurve c = pastur_curve(a);
        auto r = c.normalization_residuals();
        REQUIRE(r[0] == 0.0);
        REQUIRE(r[1] == 0.0);
        REQUIRE(c.degrees_ok());
    }
}

TEST_CASE("labeled solve matches the asymptotic series far out") {
    SpectralCurve c = pastur_curve(1.0);
    BranchPoints bps = branch_points(c, cfg);
    LabeledSolver solver(c, bps.all_locations(), cfg);
    Cd z(1e6, 0.3);
    RootTriple t = solver.triple_at(z);
    // xi2 = a + alpha/z + O(z^-2)
    REQUIRE(std::abs(t.xi[1] - (Cd(1.0) + 0.5 / z)) < 1e-11);
    REQUIRE(std::abs(t.xi[2] - (Cd(-1.0) + 0.5 / z)) < 1e-11);
    REQUIRE(vieta_sum_residual(c, t) < 1e-12);
    REQUIRE(vieta_product_residual(c, t) < 1e-12);
}

TEST_CASE("triple point at the origin for a = 1") {
    SpectralCurve c = pastur_curve(1.0);
    auto roots = curve_roots_at(c, Cd(0, 0));
    for (const auto& r : roots) REQUIRE(std::abs(r) < 1e-7);
}

TEST_CASE("Vieta identities on random sample points") {
    SpectralCurve c = pastur_curve(0.7);
    BranchPoints bps = branch_points(c, cfg);
    LabeledSolver solver(c, bps.all_locations(), cfg);
    for (Cd z : {Cd(0.3, 0.9), Cd(-1.2, 0.4), Cd(2.5, -1.1), Cd(-0.2, -2.0)}) {
        RootTriple t = solver.triple_at(z);
        REQUIRE(vieta_sum_residual(c, t) < 1e-12);
        REQUIRE(vieta_product_residual(c, t) < 1e-12);
        // conjugation symmetry of labels off the cuts
        RootTriple tc = solver.triple_at(std::conj(z));
        for (int i = 0; i < 3; ++i)
            REQUIRE(std::abs(tc.xi[static_cast<std::size_t>(i)] -
                             std::conj(t.xi[static_cast<std::size_t>(i)])) < 1e-9);
    }
}

TEST_CASE("branch points: a = 2 gives four real points") {
    SpectralCurve c = pastur_curve(2.0);
    BranchPoints bps = branch_points(c, cfg);
    REQUIRE(bps.upper_pairs.empty());
    REQUIRE(bps.real_points.size() == 4);
    REQUIRE(bps.real_points[0].location.real() == Catch::Approx(-kBpTwoOuter).epsilon(1e-9));
    REQUIRE(bps.real_points[1].location.real() == Catch::Approx(-kBpTwoInner).epsilon(1e-9));
    REQUIRE(bps.real_points[2].location.real() == Catch::Approx(kBpTwoInner).epsilon(1e-9));
    REQUIRE(bps.real_points[3].location.real() == Catch::Approx(kBpTwoOuter).epsilon(1e-9));
    for (const auto& b : bps.real_points) {
        REQUIRE_FALSE(b.triple);
        REQUIRE(b.sheet_a == 1); // endpoints branch xi1 against xi2 or xi3
        REQUIRE((b.sheet_b == 2 || b.sheet_b == 3));
    }
}

TEST_CASE("branch points: a = 1/2 gives two real and one imaginary pair") {
    SpectralCurve c = pastur_curve(0.5);
    BranchPoints bps = branch_points(c, cfg);
    REQUIRE(bps.real_points.size() == 2);
    REQUIRE(bps.upper_pairs.size() == 1);
    const auto& up = bps.upper_pairs[0];
    REQUIRE(std::abs(up.location.real()) < 1e-9);
    REQUIRE(up.location.imag() == Catch::Approx(kYStarHalf).epsilon(1e-9));
    REQUIRE(std::abs(bps.real_points[1].location.real() - kRealBpHalf) < 1e-8);
    // the nonreal pair is a xi2/xi3 collision
    REQUIRE(std::min(up.sheet_a, up.sheet_b) == 2);
    REQUIRE(std::max(up.sheet_a, up.sheet_b) == 3);
}

TEST_CASE("branch points: a = 1 has a double zero at the origin") {
    SpectralCurve c = pastur_curve(1.0);
    BranchPoints bps = branch_points(c, cfg);
    bool found = false;
    for (const auto& b : bps.real_points)
        if (std::abs(b.location.real()) < 1e-5) {
            found = true;
            REQUIRE(b.multiplicity >= 2);
            REQUIRE(b.triple);
        }
    REQUIRE(found);
}

TEST_CASE("support sets for the three regimes") {
    SpectralCurve ch = pastur_curve(0.5);
    SupportSet sh = support(ch, cfg);
    REQUIRE(sh.intervals.size() == 1);
    REQUIRE(sh.intervals[0].lo == Catch::Approx(-kRealBpHalf).epsilon(1e-8));
    REQUIRE(sh.intervals[0].hi == Catch::Approx(kRealBpHalf).epsilon(1e-8));

    SpectralCurve c2 = pastur_curve(2.0);
    SupportSet s2 = support(c2, cfg);
    REQUIRE(s2.intervals.size() == 2);
    REQUIRE(s2.intervals[0].lo == Catch::Approx(-kBpTwoOuter).epsilon(1e-8));
    REQUIRE(s2.intervals[0].hi == Catch::Approx(-kBpTwoInner).epsilon(1e-8));
    REQUIRE(s2.intervals[1].lo == Catch::Approx(kBpTwoInner).epsilon(1e-8));

    SpectralCurve c1 = pastur_curve(1.0);
    SupportSet s1 = support(c1, cfg);
    REQUIRE(s1.intervals.size() == 1);
    REQUIRE(s1.intervals[0].lo == Catch::Approx(-kBpOne).epsilon(1e-8));
    REQUIRE(s1.intervals[0].hi == Catch::Approx(kBpOne).epsilon(1e-8));
    REQUIRE(s1.intervals[0].interior_zeros.size() == 1);
    REQUIRE(std::abs(s1.intervals[0].interior_zeros[0]) < 1e-6);
}

TEST_CASE("density vanishes off the support and integrates to one") {
    for (double a : {0.5, 1.0, 2.0}) {
        SpectralCurve c = pastur_curve(a);
        SupportSet s = support(c, cfg);
        REQUIRE(density(c, s.hi() + 0.5) == 0.0);
        double mass = 0;
        for (const auto& iv : s.intervals) mass += interval_mass(c, iv, cfg);
        REQUIRE(mass == Catch::Approx(1.0).margin(1e-8));
    }
}

TEST_CASE("gap reality: all three roots real between the components") {
    SpectralCurve c = pastur_curve(2.0);
    for (double x : {-0.5, 0.0, 0.4, 0.7}) {
        auto r = curve_roots_real_axis(c, x);
        REQUIRE_FALSE(r.has_pair);
    }
}

TEST_CASE("admissibility report for the model curves") {
    for (double a : {0.5, 1.0, 2.0}) {
        SpectralCurve c = pastur_curve(a);
        auto rep = admissibility_check(c, cfg);
        REQUIRE(rep.normalization_ok);
        REQUIRE(rep.irreducible);
        REQUIRE(rep.is_admissible);
        REQUIRE(rep.total_mass == Catch::Approx(1.0).margin(1e-7));
        REQUIRE(rep.min_density >= -1e-12);
    }
}

TEST_CASE("perturbed leading coefficient is flagged") {
    SpectralCurve c = pastur_curve(0.5);
    c.p0 = Poly<double>{0.0, 0.25 * 1.1}; // 10 percent off
    auto rep = admissibility_check(c, cfg);
    REQUIRE_FALSE(rep.normalization_ok);
    REQUIRE(std::abs(rep.normalization_residuals[0]) > 1e-3);
}

TEST_CASE("alpha = 0 companion curve is reducible") {
    // p0 = a^2 z - a, p1 = 1 - a^2 admits the entire branch xi = a
    SpectralCurve c = pastur_curve(0.5);
    c.alpha = 1e-9; // formally near 0; p0 built for alpha = 0 exactly
    c.p0 = Poly<double>{-0.5, 0.25};
    auto rep = admissibility_check(c, cfg);
    REQUIRE_FALSE(rep.irreducible);
}

TEST_CASE("local behaviors: square root edges at a = 2 and 1/2") {
    for (double a : {0.5, 2.0}) {
        SpectralCurve c = pastur_curve(a);
        SupportSet s = support(c, cfg);
        BranchPoints bps = branch_points(c, cfg);
        auto behaviors = classify_local_behaviors(c, cfg, s, bps);
        int edges = 0;
        for (const auto& lb : behaviors) {
            if (lb.kind == LocalBehavior::Kind::Edge) {
                ++edges;
                REQUIRE(lb.k == 0);
                REQUIRE(std::abs(lb.fitted_exponent - 0.5) < 0.05);
            }
        }
        REQUIRE(edges == static_cast<int>(2 * s.intervals.size()));
    }
}

TEST_CASE("local behaviors: Pearcey exponent 1/3 at the origin for a = 1") {
    SpectralCurve c = pastur_curve(1.0);
    SupportSet s = support(c, cfg);
    BranchPoints bps = branch_points(c, cfg);
    auto behaviors = classify_local_behaviors(c, cfg, s, bps);
    bool pearcey = false;
    for (const auto& lb : behaviors)
        if (lb.kind == LocalBehavior::Kind::Pearcey) {
            pearcey = true;
            REQUIRE(lb.nu == 1);
            REQUIRE(std::abs(lb.fitted_exponent - 1.0 / 3.0) < 0.02);
            REQUIRE(std::abs(lb.point) < 1e-6);
        }
    REQUIRE(pearcey);
}
