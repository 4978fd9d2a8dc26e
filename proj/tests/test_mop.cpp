#include <catch2/catch_amalgamated.hpp>

#include "specurve/mop.hpp"

#include <random>

using namespace specurve;

namespace {
PrecisionConfig mp_cfg() {
    PrecisionConfig cfg;
    cfg.working_digits = 60;
    return cfg;
}

// quartic V = x^4/4 reference values computed independently with a 60-digit
// mpmath implementation of the moment systems (a = 0.7, N = 3)
const char* kQuarticA1 = "0.35998117050300803321";
const char* kQuarticA2 = "0.14544598016538482533";
const char* kQuarticB1 = "0.285362502789";
const char* kQuarticB2 = "-0.431832228829";
} // namespace

TEST_CASE("Gaussian closed form at N = 1: P_(1,1) = x^2 - 2") {
    PrecisionGuard guard(60);
    MopEngine<mp_real> eng(Potential<mp_real>({mp_real(0), mp_real(1)}), mp_real(1), 1, mp_cfg(), 6);
    const auto& rec = eng.record(1, 1);
    REQUIRE(static_cast<double>(abs(rec.P.coeff(0) + 2)) < 1e-48);
    REQUIRE(static_cast<double>(abs(rec.P.coeff(1))) < 1e-48);
    REQUIRE(rec.zeros.size() == 2);
    REQUIRE(static_cast<double>(abs(rec.zeros[1] - sqrt(mp_real(2)))) < 1e-45);
    REQUIRE(rec.orthogonality_residual < 1e-48);
    // index (0,0): unit polynomial, no zeros
    const auto& triv = eng.record(0, 0);
    REQUIRE(triv.P.degree() == 0);
    REQUIRE(triv.zeros.empty());
}

TEST_CASE("multiple Hermite recurrences: b = a_j and a = k_j / N") {
    PrecisionGuard guard(60);
    mp_real a("0.8");
    int N = 4;
    MopEngine<mp_real> eng(Potential<mp_real>({mp_real(0), mp_real(1)}), a, N, mp_cfg(), 12);
    for (auto [k1, k2] : {std::pair{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
        auto rd = eng.recurrence_coefficients({k1, k2});
        REQUIRE(static_cast<double>(abs(rd.b1 - a)) < 1e-45);
        REQUIRE(static_cast<double>(abs(rd.b2 + a)) < 1e-45);
        REQUIRE(static_cast<double>(abs(rd.a1 - mp_real(k1) / N)) < 1e-45);
        REQUIRE(static_cast<double>(abs(rd.a2 - mp_real(k2) / N)) < 1e-45);
        REQUIRE(rd.nn_residual < 1e-45);
        REQUIRE(rd.ab_cross_residual < 1e-45);
    }
}

TEST_CASE("quartic recurrence coefficients against the independent oracle") {
    PrecisionGuard guard(60);
    MopEngine<mp_real> eng(Potential<mp_real>({mp_real(0), mp_real(0), mp_real(0), mp_real(1)}),
                           mp_real("0.7"), 3, mp_cfg(), 12);
    auto rd = eng.recurrence_coefficients({2, 1});
    REQUIRE(static_cast<double>(abs(rd.a1 - mp_real(kQuarticA1))) < 1e-18);
    REQUIRE(static_cast<double>(abs(rd.a2 - mp_real(kQuarticA2))) < 1e-18);
    REQUIRE(static_cast<double>(abs(rd.b1 - mp_real(kQuarticB1))) < 1e-11);
    REQUIRE(static_cast<double>(abs(rd.b2 - mp_real(kQuarticB2))) < 1e-11);
}

TEST_CASE("zeros real, simple, interlacing along the lattice") {
    PrecisionGuard guard(60);
    MopEngine<mp_real> eng(Potential<mp_real>({mp_real(0), mp_real("0.4"), mp_real(0), mp_real(1)}),
                           mp_real("0.6"), 2, mp_cfg(), 10);
    auto interlace = [](const std::vector<mp_real>& inner, const std::vector<mp_real>& outer) {
        REQUIRE(outer.size() == inner.size() + 1);
        for (std::size_t i = 0; i < inner.size(); ++i) {
            REQUIRE(outer[i] < inner[i]);
            REQUIRE(inner[i] < outer[i + 1]);
        }
    };
    for (auto [k1, k2] : {std::pair{1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
        const auto& rec = eng.record(k1, k2);
        REQUIRE(static_cast<int>(rec.zeros.size()) == k1 + k2);
        if (k1 > 0) interlace(eng.record(k1 - 1, k2).zeros, rec.zeros);
        if (k2 > 0) interlace(eng.record(k1, k2 - 1).zeros, rec.zeros);
    }
}

TEST_CASE("biorthogonality pattern") {
    PrecisionGuard guard(60);
    MopEngine<mp_real> eng(Potential<mp_real>({mp_real(0), mp_real(1)}), mp_real("0.9"), 2,
                           mp_cfg(), 10);
    // 1 when |k| = |j| - 1
    REQUIRE(static_cast<double>(abs(biorthogonality_integral(eng, {1, 1}, {2, 1}) - 1)) < 1e-45);
    REQUIRE(static_cast<double>(abs(biorthogonality_integral(eng, {2, 1}, {2, 2}) - 1)) < 1e-45);
    // 0 in the component cone and for |k| <= |j| - 2
    REQUIRE(static_cast<double>(abs(biorthogonality_integral(eng, {2, 2}, {2, 2}))) < 1e-45);
    REQUIRE(static_cast<double>(abs(biorthogonality_integral(eng, {3, 2}, {2, 2}))) < 1e-45);
    REQUIRE(static_cast<double>(abs(biorthogonality_integral(eng, {1, 1}, {3, 2}))) < 1e-45);
}

TEST_CASE("up-right path construction") {
    UpRightPath p = UpRightPath::toward(0.5, 12);
    REQUIRE(p.d == 2);
    for (std::size_t k = 0; k + 1 < p.steps.size(); ++k) {
        int dk = (p.steps[k + 1].k1 - p.steps[k].k1) + (p.steps[k + 1].k2 - p.steps[k].k2);
        REQUIRE(dk == 1);
    }
    REQUIRE(p.steps[6].k1 == 3);
    REQUIRE(p.steps[6].k2 == 3);
    UpRightPath q = UpRightPath::toward(1.0 / 3.0, 12);
    REQUIRE(q.d == 3);
    REQUIRE(q.steps.back().k1 == 4);
}

TEST_CASE("step recurrence and off-path expansions on the quartic lattice") {
    PrecisionGuard guard(60);
    MopEngine<mp_real> eng(Potential<mp_real>({mp_real(0), mp_real(0), mp_real(0), mp_real(1)}),
                           mp_real("0.7"), 3, mp_cfg(), 14);
    UpRightPath path = UpRightPath::toward(0.5, 12);

    auto off = offpath_coefficients(eng, path, 6);
    REQUIRE(off.p_list.size() >= 1);
    REQUIRE(off.p_list[0] == mp_real(1)); // base case
    REQUIRE(off.q_list[0] == mp_real(1));
    REQUIRE(off.p_residual < 1e-40);
    REQUIRE(off.q_residual < 1e-40);

    auto sr = step_recurrence(eng, path, 6);
    REQUIRE(sr.theta.size() == static_cast<std::size_t>(path.d) + 1);
    REQUIRE(sr.residual < 1e-40);
    // independently derived values for the alternating path at k = 6
    REQUIRE(static_cast<double>(abs(sr.theta[0] - mp_real("0.26858352"))) < 1e-7);
    REQUIRE(static_cast<double>(abs(sr.theta[1] - mp_real("0.77459795"))) < 1e-7);
    REQUIRE(static_cast<double>(abs(sr.theta[2] - mp_real("0.24943362"))) < 1e-7);
    // theta_1 = a^(1) + a^(2) along any path
    auto rd = eng.recurrence_coefficients(path.steps[6]);
    REQUIRE(static_cast<double>(abs(sr.theta[1] - (rd.a1 + rd.a2))) < 1e-40);

    REQUIRE_THROWS_AS(step_recurrence(eng, path, 0), PartialWindowError);
}

TEST_CASE("multiple Hermite off-path products use the 2a spacing") {
    PrecisionGuard guard(60);
    mp_real a("0.8");
    MopEngine<mp_real> eng(Potential<mp_real>({mp_real(0), mp_real(1)}), a, 3, mp_cfg(), 12);
    UpRightPath path = UpRightPath::toward(0.5, 10);
    auto off = offpath_coefficients(eng, path, 5);
    for (std::size_t i = 0; i + 1 < off.p_list.size(); ++i) {
        mp_real ratio = off.p_list[i + 1] / off.p_list[i];
        REQUIRE(static_cast<double>(abs(abs(ratio) - 2 * a)) < 1e-40);
    }
}

TEST_CASE("condition guard rejects an exhausted precision budget") {
    PrecisionGuard guard(20); // deliberately small working precision
    PrecisionConfig cfg;
    cfg.working_digits = 20;
    MopEngine<mp_real> eng(Potential<mp_real>({mp_real(0), mp_real(1)}), mp_real(1), 1, cfg, 40);
    bool guarded = false;
    try {
        for (int k = 2; k <= 18; ++k) eng.record(k, k);
    } catch (const ConvergenceError&) {
        guarded = true;
    } catch (const InconsistencyError&) {
        guarded = true; // zero merging may trip first at low precision
    }
    REQUIRE(guarded);
}
