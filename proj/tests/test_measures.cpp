#include <catch2/catch_amalgamated.hpp>

#include "specurve/measures.hpp"

using namespace specurve;

namespace {
const PrecisionConfig cfg = double_config();

struct Workup {
    SpectralCurve curve;
    RegimeReport regime;
    GammaStar gamma;
    VectorCriticalMeasure vcm;
};

Workup analyze(double a, int samples = 900) {
    Workup w;
    w.curve = pastur_curve(a);
    w.regime = classify_regime(w.curve, cfg);
    w.gamma = build_gamma_star(w.curve, w.regime, cfg);
    w.vcm = extract_measures(w.curve, w.regime, &w.gamma, cfg, samples);
    return w;
}
} // namespace

TEST_CASE("split: two symmetric components at a = 2") {
    SpectralCurve c = pastur_curve(2.0);
    RegimeReport reg = classify_regime(c, cfg);
    GammaStar gs = build_gamma_star(c, reg, cfg);
    DeltaSplit split = split_delta(c, reg, &gs, cfg);
    REQUIRE(split.delta1.size() == 1);
    REQUIRE(split.delta2.size() == 1);
    REQUIRE(split.delta1[0].first > 0);   // right component carries mu1
    REQUIRE(split.delta2[0].second < 0);  // left component carries mu2
    REQUIRE(split.x_star == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("split: single component split at the Delta3 crossing for a = 1/2") {
    Workup w = analyze(0.5, 400);
    REQUIRE(w.vcm.x_star.has_value());
    REQUIRE(*w.vcm.x_star < 0);
    REQUIRE(*w.vcm.x_star == Catch::Approx(w.gamma.crossing));
    // separation max supp mu2 <= x* <= min supp mu1
    REQUIRE(w.vcm.mu2.chains.front().points.back().real() <= *w.vcm.x_star + 1e-12);
    REQUIRE(w.vcm.mu1.chains.front().points.front().real() >= *w.vcm.x_star - 1e-12);
}

TEST_CASE("split: singular case splits at the triple point") {
    SpectralCurve c = pastur_curve(1.0);
    RegimeReport reg = classify_regime(c, cfg);
    DeltaSplit split = split_delta(c, reg, nullptr, cfg);
    REQUIRE(std::abs(split.x_star) < 1e-6);
    REQUIRE(split.delta1.size() == 1);
    REQUIRE(split.delta2.size() == 1);
}

TEST_CASE("mass bookkeeping across the three regimes") {
    for (double a : {0.5, 1.0, 2.0}) {
        Workup w = analyze(a, a == 0.5 ? 900 : 400);
        REQUIRE(w.vcm.mass1 + w.vcm.mass2 == Catch::Approx(1.0).margin(1e-6));
        REQUIRE(w.vcm.mass1 - w.vcm.mass3 == Catch::Approx(0.5).margin(1e-6));
        REQUIRE(w.vcm.mass2 + w.vcm.mass3 == Catch::Approx(0.5).margin(1e-6));
        if (a == 2.0) {
            REQUIRE(w.vcm.mass1 == Catch::Approx(0.5).margin(1e-8));
            REQUIRE(w.vcm.mass3 == 0.0);
        }
        if (a == 0.5) REQUIRE(w.vcm.mass3 > 0.01);
    }
}

TEST_CASE("mu3 density is nonnegative and conjugate symmetric") {
    Workup w = analyze(0.5, 600);
    const auto& ch = w.vcm.mu3.chains.front();
    REQUIRE(ch.points.size() > 100);
    for (double v : ch.values) REQUIRE(v >= 0.0);
    // symmetry: value at conj point equals value at point
    std::size_t n = ch.points.size();
    for (std::size_t i = 0; i < n / 4; ++i) {
        REQUIRE(std::abs(ch.points[i] - std::conj(ch.points[n - 1 - i])) < 1e-9);
        REQUIRE(ch.values[i] == Catch::Approx(ch.values[n - 1 - i]).margin(1e-12));
    }
}

TEST_CASE("lambda reconstruction: mu1 + mu2 matches the curve density") {
    Workup w = analyze(0.5, 500);
    for (double x : {-1.8, -1.2, 0.3, 1.1, 2.0}) {
        double rho = density(w.curve, x);
        double from_profiles = 0;
        for (const DensityProfile* p : {&w.vcm.mu1, &w.vcm.mu2}) {
            for (const auto& ch : p->chains) {
                if (x < ch.points.front().real() || x > ch.points.back().real()) continue;
                for (std::size_t i = 0; i + 1 < ch.points.size(); ++i) {
                    double a0 = ch.points[i].real(), a1 = ch.points[i + 1].real();
                    if (x >= a0 && x <= a1) {
                        double t = (x - a0) / (a1 - a0);
                        from_profiles = (1 - t) * ch.values[i] + t * ch.values[i + 1];
                    }
                }
            }
        }
        REQUIRE(from_profiles == Catch::Approx(rho).margin(1e-5));
    }
}

TEST_CASE("Cauchy transform identities hold off the supports") {
    Workup w = analyze(0.5, 900);
    std::vector<Cd> grid;
    for (int k = 0; k < 24; ++k) {
        double th = 2 * M_PI * (k + 0.3) / 24;
        grid.push_back(Cd(3.4 * std::cos(th), 2.2 * std::sin(th)));
    }
    auto res = cauchy_residuals(w.curve, w.regime, w.vcm, grid, &w.gamma, cfg);
    REQUIRE(res.skipped == 0);
    REQUIRE(res.max1 < 1e-4);
    REQUIRE(res.max2 < 1e-4);
    REQUIRE(res.max3 < 1e-4);

    // refinement: doubling the sampling at least halves the worst residual
    // (compared where the sample spacing dominates the error budget)
    Workup wc = analyze(0.5, 150);
    Workup wf = analyze(0.5, 300);
    auto resc = cauchy_residuals(wc.curve, wc.regime, wc.vcm, grid, &wc.gamma, cfg);
    auto resf = cauchy_residuals(wf.curve, wf.regime, wf.vcm, grid, &wf.gamma, cfg);
    double worstc = std::max({resc.max1, resc.max2, resc.max3});
    double worstf = std::max({resf.max1, resf.max2, resf.max3});
    REQUIRE(worstf <= 0.5 * worstc);

    // far field: both sides share the expansion through 1/z
    LabeledSolver solver(w.curve, w.regime.bps.all_locations(), cfg);
    Cd zfar(10.0 * solver.anchor_radius(), 3.0);
    auto far = cauchy_residuals(w.curve, w.regime, w.vcm, {zfar}, &w.gamma, cfg);
    REQUIRE(std::max({far.max1, far.max2, far.max3}) < 10.0 / std::norm(zfar));
}

TEST_CASE("unsaturated second relation reduces to xi2 = -C[mu1] + a") {
    Workup w = analyze(2.0, 700);
    REQUIRE(w.vcm.mu3.empty());
    LabeledSolver solver(w.curve, w.regime.bps.all_locations(), cfg);
    Cd z(0.4, 1.3);
    RootTriple t = solver.triple_at(z);
    Cd r = t.xi[1] - (w.vcm.mu1.cauchy(z) * (-1.0) + Cd(w.curve.a));
    REQUIRE(std::abs(r) < 2e-5);
}

TEST_CASE("variational constants and the S property (saturated symmetric)") {
    Workup w = analyze(0.5, 1400);
    auto rep = variational_residuals(w.curve, w.vcm, cfg);
    REQUIRE(rep.max_constancy_deviation < 1e-5);
    REQUIRE(rep.has_l3);
    REQUIRE(std::abs(rep.l3_mean) < 1e-5); // symmetric saturated: l3 = 0
    REQUIRE(std::isfinite(rep.energy));

    // S-property residual decreases about linearly in the offset
    double s2 = s_property_residual(w.curve, w.vcm, 1e-2);
    double s3 = s_property_residual(w.curve, w.vcm, 1e-3);
    REQUIRE(s3 < 0.5 * s2);

    // l1 = l2 for the symmetric curve (Boutroux certified by symmetry)
    double l1 = 0, l2 = 0;
    for (const auto& pc : rep.per_component) {
        if (pc.measure == 1) l1 = pc.mean;
        if (pc.measure == 2) l2 = pc.mean;
    }
    REQUIRE(l1 == Catch::Approx(l2).margin(2e-5));
}

TEST_CASE("variational constants in the unsaturated case") {
    Workup w = analyze(2.0, 1400);
    auto rep = variational_residuals(w.curve, w.vcm, cfg);
    REQUIRE(rep.max_constancy_deviation < 1e-5);
    REQUIRE_FALSE(rep.has_l3);
}

TEST_CASE("genus bookkeeping") {
    Workup wh = analyze(0.5, 300);
    bool note = false;
    REQUIRE(genus(wh.regime, &note) == 0);
    REQUIRE_FALSE(note);
    Workup w2 = analyze(2.0, 300);
    REQUIRE(genus(w2.regime, &note) == 0);
    Workup w1 = analyze(1.0, 300);
    REQUIRE(genus(w1.regime, &note) == 0);
    REQUIRE(note);
}

TEST_CASE("cycle periods match the mass combinations") {
    // a = 2: two disjoint components, periods -+ 1/2
    Workup w2 = analyze(2.0, 900);
    auto cycles2 = boutroux_periods(w2.curve, w2.regime, w2.vcm, &w2.gamma, cfg);
    REQUIRE(cycles2.items.size() == 2);
    for (const auto& it : cycles2.items) {
        REQUIRE(std::abs(it.period.imag()) < 1e-5);
        REQUIRE(it.period.real() == Catch::Approx(it.mass_combo).margin(1e-5));
        REQUIRE(std::abs(std::abs(it.mass_combo) - 0.5) < 1e-5);
        REQUIRE(it.re_sqrt_part < 1e-5 * (2 * M_PI));
    }

    // a = 1/2: one connected component, trivially forced period 1 - 2 alpha = 0
    Workup wh = analyze(0.5, 900);
    auto cycles = boutroux_periods(wh.curve, wh.regime, wh.vcm, &wh.gamma, cfg);
    REQUIRE(cycles.items.size() == 1);
    REQUIRE(std::abs(cycles.items[0].period.real()) < 1e-5);
    REQUIRE(std::abs(cycles.items[0].mass_combo) < 1e-5);
    REQUIRE(cycles.items[0].re_sqrt_part < 1e-4);
}
