#ifndef SPECURVE_MEASURES_HPP
#define SPECURVE_MEASURES_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qd.hpp"
#include "quadrature.hpp"

namespace specurve {

/// Interaction matrix of the three-measure energy: Angelesco coupling
/// between components 1-2 and 2-3, Nikishin between 1-3.
inline const std::array<std::array<double, 3>, 3>& interaction_matrix() {
    static const std::array<std::array<double, 3>, 3> B{{{1.0, 0.5, -0.5},
                                                         {0.5, 1.0, 0.5},
                                                         {-0.5, 0.5, 1.0}}};
    return B;
}

/// phi_j = Re V_j with V_1 = V - a z, V_2 = V + a z, V_3 = 2 a z.
inline double external_field(const SpectralCurve& curve, int j, const Cd& z) {
    switch (j) {
        case 1: return (curve.V.value(z) - curve.a * z).real();
        case 2: return (curve.V.value(z) + curve.a * z).real();
        default: return 2.0 * curve.a * z.real();
    }
}

// ---------------------------------------------------------------------------
// sampled densities with exact log-kernel panel integration

/// Piecewise-linear density profile along straight panels (real intervals or
/// a polyline), with exact per-panel integration of the logarithmic kernel.
struct DensityProfile {
    struct Chain {
        std::vector<Cd> points;
        std::vector<double> values; // density per unit arclength
    };
    std::vector<Chain> chains;
    double mass = 0;

    bool empty() const {
        for (const auto& c : chains)
            if (c.points.size() >= 2) return false;
        return true;
    }

    double interpolant_mass() const {
        double s = 0;
        for (const auto& c : chains)
            for (std::size_t i = 0; i + 1 < c.points.size(); ++i)
                s += 0.5 * (c.values[i] + c.values[i + 1]) * std::abs(c.points[i + 1] - c.points[i]);
        return s;
    }

    /// Logarithmic potential  U(z) = int log(1/|s-z|) dmu(s)  of the linear
    /// interpolant, each panel integrated in closed form (valid for z on the
    /// panel as well).
    double potential(const Cd& z) const {
        double total = 0;
        for (const auto& c : chains) {
            for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
                const Cd p0 = c.points[i], p1 = c.points[i + 1];
                const double L = std::abs(p1 - p0);
                if (L == 0) continue;
                const Cd u = (p1 - p0) / L;
                const Cd w = (z - p0) * std::conj(u);
                const double cpar = w.real();
                const double d = std::abs(w.imag());
                auto G = [&](double s) { // int (1/2) log(s^2+d^2) ds
                    if (d == 0) return s == 0 ? 0.0 : s * std::log(std::abs(s)) - s;
                    return 0.5 * s * std::log(s * s + d * d) - s + d * std::atan(s / d);
                };
                auto F = [&](double s) { // int s (1/2) log(s^2+d^2) ds
                    double r2 = s * s + d * d;
                    if (r2 == 0) return 0.0;
                    return 0.25 * (r2 * std::log(r2) - s * s);
                };
                double s0 = -cpar, s1 = L - cpar;
                double rho0 = c.values[i], slope = (c.values[i + 1] - c.values[i]) / L;
                double i0 = G(s1) - G(s0);
                double i1 = (F(s1) - F(s0)) + cpar * i0;
                total -= rho0 * i0 + slope * i1;
            }
        }
        return total;
    }

    /// Cauchy transform int dmu(s)/(s - z), z off the support.
    Cd cauchy(const Cd& z) const {
        const auto& gl = GaussLegendre<double>::get(12);
        Cd total(0);
        for (const auto& c : chains) {
            for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
                const Cd p0 = c.points[i], p1 = c.points[i + 1];
                const double L = std::abs(p1 - p0);
                if (L == 0) continue;
                const Cd mid = 0.5 * (p0 + p1), half = 0.5 * (p1 - p0);
                const double rho0 = c.values[i], rho1 = c.values[i + 1];
                Cd acc(0);
                for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
                    double t = gl.nodes[k];
                    Cd s = mid + half * t;
                    double rho = 0.5 * ((1 - t) * rho0 + (1 + t) * rho1);
                    acc += gl.weights[k] * rho / (s - z);
                }
                total += acc * (L / 2.0);
            }
        }
        return total;
    }

    double min_distance(const Cd& z) const {
        double d = 1e300;
        for (const auto& c : chains)
            for (std::size_t i = 0; i + 1 < c.points.size(); ++i)
                d = std::min(d, dist_point_segment(z, c.points[i], c.points[i + 1]));
        return d;
    }
};

/// Cosine-graded nodes on [lo,hi] (dense at both endpoints).
inline std::vector<double> cos_grid(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        xs[static_cast<std::size_t>(k)] =
            lo + (hi - lo) * 0.5 * (1.0 - std::cos(M_PI * k / (n - 1)));
    return xs;
}

// ---------------------------------------------------------------------------
// Delta splitting

struct DeltaSplit {
    std::vector<std::pair<double, double>> delta1, delta2;
    double x_star = 0;
    std::string continuation_path_doc;
};

/// Assign support components to Delta1 / Delta2 through the boundary sign of
/// Im(xi2 - xi3) with labels continued from +i infinity off the Delta3 cut.
/// At most one component splits, at the Gamma* crossing (saturated) or the
/// triple point (singular).
inline DeltaSplit split_delta(const SpectralCurve& curve, const RegimeReport& regime,
                              const GammaStar* gamma, const PrecisionConfig& cfg) {
    LabeledSolver solver(curve, regime.bps.all_locations(), cfg);
    std::vector<Polyline> cuts;
    if (gamma && gamma->delta3.size() >= 2) {
        Polyline upper;
        for (const auto& p : gamma->delta3)
            if (p.imag() >= -1e-14) upper.push_back(p);
        if (upper.size() >= 2) cuts.push_back(upper);
    }
    solver.set_cuts(cuts);

    std::optional<double> split_at;
    if (regime.kind == RegimeReport::Kind::Saturated && gamma) split_at = gamma->crossing;
    if (regime.kind == RegimeReport::Kind::UnsaturatedSingular) split_at = regime.x_star;

    auto sign_at = [&](double x) {
        RootTriple t = solver.triple_above(x, 1e-6 * (1.0 + std::abs(x)));
        double im = (t.xi[1] - t.xi[2]).imag();
        return im < 0 ? -1 : +1; // -1 -> Delta1, +1 -> Delta2
    };

    DeltaSplit out;
    out.continuation_path_doc =
        "labels continued from +i*anchor along staircase routes off the Delta3 cut";
    double max2 = -1e300, min1 = 1e300;
    for (const auto& iv : regime.support.intervals) {
        double w = iv.hi - iv.lo;
        std::vector<std::pair<double, double>> pieces;
        if (split_at && *split_at > iv.lo + 1e-9 * w && *split_at < iv.hi - 1e-9 * w) {
            pieces.push_back({iv.lo, *split_at});
            pieces.push_back({*split_at, iv.hi});
        } else {
            pieces.push_back({iv.lo, iv.hi});
        }
        for (auto& pc : pieces) {
            double w2 = pc.second - pc.first;
            int s_mid = sign_at(pc.first + 0.5 * w2);
            int s_a = sign_at(pc.first + 0.2 * w2);
            int s_b = sign_at(pc.first + 0.8 * w2);
            if (s_a != s_mid || s_b != s_mid)
                throw InconsistencyError(
                    "split_delta: sign change inside a component without a crossing witness");
            if (s_mid < 0) {
                out.delta1.push_back(pc);
                min1 = std::min(min1, pc.first);
            } else {
                out.delta2.push_back(pc);
                max2 = std::max(max2, pc.second);
            }
        }
    }
    if (split_at) {
        out.x_star = *split_at;
    } else {
        // separator in the gap between the Delta families
        if (out.delta1.empty() || out.delta2.empty()) {
            out.x_star = out.delta1.empty() ? max2 : min1;
        } else {
            out.x_star = 0.5 * (max2 + min1);
        }
    }
    if (!(out.delta2.empty() || out.delta1.empty()) && max2 > min1 + 1e-9)
        throw InconsistencyError("split_delta: Delta ordering violated");
    return out;
}

// ---------------------------------------------------------------------------
// measure extraction

struct VectorCriticalMeasure {
    DensityProfile mu1, mu2, mu3;
    double mass1 = 0, mass2 = 0, mass3 = 0;
    std::optional<double> x_star;
    std::map<std::string, double> residuals;
};

namespace detail {

inline DensityProfile real_profile(const SpectralCurve& curve,
                                   const std::vector<std::pair<double, double>>& intervals,
                                   const PrecisionConfig& cfg, int samples_per_component) {
    DensityProfile prof;
    double mass = 0;
    for (const auto& iv : intervals) {
        DensityProfile::Chain ch;
        auto xs = cos_grid(iv.first, iv.second, samples_per_component);
        for (double x : xs) {
            ch.points.push_back(Cd(x, 0));
            ch.values.push_back(density(curve, x));
        }
        prof.chains.push_back(std::move(ch));
        double mid = 0.5 * (iv.first + iv.second), half = 0.5 * (iv.second - iv.first);
        auto f = [&](double t) {
            double x = mid + half * std::sin(M_PI * t / 2);
            return density(curve, x) * half * (M_PI / 2) * std::cos(M_PI * t / 2);
        };
        mass += adaptive_gauss<double>(f, -1.0, 1.0, cfg.quad_rel_tol * 0.01, 32);
    }
    prof.mass = mass;
    return prof;
}

} // namespace detail

/// Densities of the three measures:
///   d mu1 = (1/2pi i)(xi1 - xi2)_+ ds on Delta1  ( = density of lambda there)
///   d mu2 = (1/2pi i)(xi1 - xi3)_+ ds on Delta2
///   d mu3 = (1/2pi i)(xi2 - xi3)_+ ds on Delta3  (zero when unsaturated)
inline VectorCriticalMeasure extract_measures(const SpectralCurve& curve,
                                              const RegimeReport& regime, const GammaStar* gamma,
                                              const PrecisionConfig& cfg,
                                              int samples_per_component = 1200) {
    DeltaSplit split = split_delta(curve, regime, gamma, cfg);
    VectorCriticalMeasure vcm;
    vcm.x_star = split.x_star;
    vcm.mu1 = detail::real_profile(curve, split.delta1, cfg, samples_per_component);
    vcm.mu2 = detail::real_profile(curve, split.delta2, cfg, samples_per_component);
    vcm.mass1 = vcm.mu1.mass;
    vcm.mass2 = vcm.mu2.mass;

    if (regime.kind == RegimeReport::Kind::Saturated) {
        if (!gamma || gamma->delta3.size() < 2)
            throw ContractViolation("extract_measures: saturated regime requires Gamma*");
        // boundary values are walked along a one-sided offset of the upper
        // sub-arc only; the lower half follows by conjugation symmetry
        const Polyline& d3 = gamma->delta3;
        std::size_t cross = 0;
        double best = 1e300;
        for (std::size_t i = 0; i < d3.size(); ++i)
            if (std::abs(d3[i].imag()) < best) { best = std::abs(d3[i].imag()); cross = i; }
        Polyline upper(d3.begin() + static_cast<std::ptrdiff_t>(cross), d3.end()); // x* -> y*

        int n = samples_per_component / 2 + 2;
        std::vector<double> fr(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            fr[static_cast<std::size_t>(k)] = 0.5 * (1.0 - std::cos(M_PI * k / (n - 1)));
        Polyline pts = resample_polyline(upper, fr);
        std::vector<Cd> tangents(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Cd t = (i == 0) ? pts[1] - pts[0]
                            : (i + 1 == pts.size() ? pts[i] - pts[i - 1] : pts[i + 1] - pts[i - 1]);
            tangents[i] = t / std::abs(t);
        }
        LabeledSolver solver(curve, regime.bps.all_locations(), cfg);
        Polyline upper_cut;
        for (const auto& p : d3)
            if (p.imag() >= -1e-14) upper_cut.push_back(p);
        solver.set_cuts({upper_cut});

        const double eps = 1e-6 * (1.0 + std::abs(*regime.y_star));
        auto offset_point = [&](std::size_t i, double side) {
            Cd p = pts[i] + side * eps * Cd(0, 1) * tangents[i];
            if (p.imag() < eps / 4) p += Cd(0, eps / 4 - p.imag());
            return p;
        };
        std::size_t mid = pts.size() / 2;
        double side = 1.0;
        RootTriple seed = solver.triple_at(offset_point(mid, side));
        double probe = ((seed.xi[1] - seed.xi[2]) * tangents[mid] / Cd(0, 2 * M_PI)).real();
        if (probe < 0) {
            side = -1.0;
            seed = solver.triple_at(offset_point(mid, side));
        }
        std::vector<double> vals(pts.size(), 0.0);
        auto walk = [&](std::size_t from, int dir) {
            auto labels = seed.xi;
            Cd pos = offset_point(from, side);
            for (std::size_t i = from;;) {
                Cd target = offset_point(i, side);
                labels = solver.continue_labels(labels, pos, target);
                pos = target;
                vals[i] = ((labels[1] - labels[2]) * tangents[i] / Cd(0, 2 * M_PI)).real();
                if (dir > 0) {
                    if (++i >= pts.size()) break;
                } else {
                    if (i-- == 0) break;
                }
            }
        };
        walk(mid, +1);
        walk(mid, -1);
        vals.back() = 0.0; // the density vanishes at the arc tip
        double worst_neg = 0;
        for (double v : vals) worst_neg = std::min(worst_neg, v);
        if (worst_neg < -1e-6)
            throw InconsistencyError("extract_measures: negative mu3 density");
        DensityProfile::Chain ch; // conj(y*) -> x* -> y*
        for (std::size_t i = pts.size(); i-- > 1;) {
            ch.points.push_back(std::conj(pts[i]));
            ch.values.push_back(std::max(vals[i], 0.0));
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            ch.points.push_back(pts[i]);
            ch.values.push_back(std::max(vals[i], 0.0));
        }
        vcm.mu3.chains.push_back(std::move(ch));
        vcm.mu3.mass = vcm.mu3.interpolant_mass();
        vcm.mass3 = vcm.mu3.mass;
    }

    vcm.residuals["mass_sum"] = std::abs(vcm.mass1 + vcm.mass2 - 1.0);
    vcm.residuals["mass_alpha"] = std::abs(vcm.mass1 - vcm.mass3 - curve.alpha);
    vcm.residuals["mass_complement"] = std::abs(vcm.mass2 + vcm.mass3 - (1.0 - curve.alpha));
    return vcm;
}

// ---------------------------------------------------------------------------
// Cauchy-transform identities

struct CauchyResiduals {
    double max1 = 0, max2 = 0, max3 = 0;
    std::vector<double> per_point;
    int skipped = 0;
};

/// xi1 = C[mu1] + C[mu2] + V', xi2 = C[mu3] - C[mu1] + a,
/// xi3 = -C[mu2] - C[mu3] - a, checked on a grid off the supports.
inline CauchyResiduals cauchy_residuals(const SpectralCurve& curve, const RegimeReport& regime,
                                        const VectorCriticalMeasure& vcm,
                                        const std::vector<Cd>& zgrid, const GammaStar* gamma,
                                        const PrecisionConfig& cfg) {
    LabeledSolver solver(curve, regime.bps.all_locations(), cfg);
    if (gamma && gamma->delta3.size() >= 2) {
        Polyline upper;
        for (const auto& p : gamma->delta3)
            if (p.imag() >= -1e-14) upper.push_back(p);
        solver.set_cuts({upper});
    }
    CauchyResiduals out;
    for (const auto& z : zgrid) {
        double clearance = std::min({vcm.mu1.empty() ? 1e300 : vcm.mu1.min_distance(z),
                                     vcm.mu2.empty() ? 1e300 : vcm.mu2.min_distance(z),
                                     vcm.mu3.empty() ? 1e300 : vcm.mu3.min_distance(z)});
        if (clearance < 1e-3 || std::abs(z.imag()) < 1e-9) {
            ++out.skipped;
            continue;
        }
        RootTriple t = solver.triple_at(z);
        Cd c1 = vcm.mu1.cauchy(z), c2 = vcm.mu2.cauchy(z);
        Cd c3 = vcm.mu3.empty() ? Cd(0) : vcm.mu3.cauchy(z);
        double r1 = std::abs(t.xi[0] - (c1 + c2 + curve.V.dvalue(z)));
        double r2 = std::abs(t.xi[1] - (c3 - c1 + curve.a));
        double r3 = std::abs(t.xi[2] - (-c2 - c3 - curve.a));
        out.max1 = std::max(out.max1, r1);
        out.max2 = std::max(out.max2, r2);
        out.max3 = std::max(out.max3, r3);
        out.per_point.push_back(std::max({r1, r2, r3}));
    }
    return out;
}

// ---------------------------------------------------------------------------
// variational identities, S-property, energy

struct VariationalReport {
    struct ComponentConstant {
        int measure = 0; // 1..3
        double mean = 0;
        double max_deviation = 0;
    };
    std::vector<ComponentConstant> per_component;
    double max_constancy_deviation = 0;
    double s_property_max = 0;
    double s_property_offset = 0;
    double energy = 0;
    double l3_mean = 0; // mean of the Delta3 combination (saturated case)
    bool has_l3 = false;
};

namespace detail {

inline double combo_value(const SpectralCurve& curve, const VectorCriticalMeasure& vcm, int i,
                          const Cd& z) {
    const auto& B = interaction_matrix();
    const DensityProfile* mus[3] = {&vcm.mu1, &vcm.mu2, &vcm.mu3};
    double s = 0;
    for (int k = 0; k < 3; ++k) {
        if (mus[k]->empty()) continue;
        s += B[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)] *
             mus[k]->potential(z);
    }
    return s + 0.5 * external_field(curve, i, z);
}

} // namespace detail

/// Evaluate sum_k b_{ik} U^{mu_k} + phi_i/2 over each support component of
/// mu_i (constant there for a critical measure), the S-property jump across
/// Delta3, and the total vector energy.
inline VariationalReport variational_residuals(const SpectralCurve& curve,
                                               const VectorCriticalMeasure& vcm,
                                               const PrecisionConfig& cfg,
                                               double s_offset = 1e-3, int grid_per_component = 24) {
    (void)cfg;
    VariationalReport rep;
    const DensityProfile* mus[3] = {&vcm.mu1, &vcm.mu2, &vcm.mu3};
    for (int i = 1; i <= 2; ++i) {
        for (const auto& ch : mus[i - 1]->chains) {
            if (ch.points.size() < 2) continue;
            double lo = ch.points.front().real(), hi = ch.points.back().real();
            double w = hi - lo;
            double mean = 0;
            std::vector<double> vals;
            for (int g = 0; g < grid_per_component; ++g) {
                double x = lo + w * (0.08 + 0.84 * g / (grid_per_component - 1));
                vals.push_back(detail::combo_value(curve, vcm, i, Cd(x, 0)));
                mean += vals.back();
            }
            mean /= vals.size();
            double dev = 0;
            for (double v : vals) dev = std::max(dev, std::abs(v - mean));
            rep.per_component.push_back({i, mean, dev});
            rep.max_constancy_deviation = std::max(rep.max_constancy_deviation, dev);
        }
    }
    if (!vcm.mu3.empty()) {
        const auto& ch = vcm.mu3.chains.front();
        double mean = 0;
        std::vector<double> vals;
        std::vector<Cd> pts, nrm;
        for (int g = 0; g < grid_per_component; ++g) {
            std::size_t idx = static_cast<std::size_t>(
                (0.1 + 0.8 * double(g) / (grid_per_component - 1)) * (ch.points.size() - 1));
            Cd p = ch.points[idx];
            Cd t = (idx + 1 < ch.points.size() ? ch.points[idx + 1] - ch.points[idx]
                                               : ch.points[idx] - ch.points[idx - 1]);
            t /= std::abs(t);
            pts.push_back(p);
            nrm.push_back(Cd(0, 1) * t);
            vals.push_back(detail::combo_value(curve, vcm, 3, p));
            mean += vals.back();
        }
        mean /= vals.size();
        double dev = 0;
        for (double v : vals) dev = std::max(dev, std::abs(v - mean));
        rep.per_component.push_back({3, mean, dev});
        rep.max_constancy_deviation = std::max(rep.max_constancy_deviation, dev);
        rep.l3_mean = mean;
        rep.has_l3 = true;

        rep.s_property_offset = s_offset;
        for (std::size_t g = 0; g < pts.size(); ++g) {
            double wp = detail::combo_value(curve, vcm, 3, pts[g] + s_offset * nrm[g]);
            double wm = detail::combo_value(curve, vcm, 3, pts[g] - s_offset * nrm[g]);
            // mean of the two one-sided normal derivatives (opposite normals)
            rep.s_property_max = std::max(rep.s_property_max, std::abs((wp - wm) / s_offset));
        }
    }

    // vector energy: E = sum b_jk I(mu_j, mu_k) + sum int phi_j dmu_j
    const auto& B = interaction_matrix();
    double energy = 0;
    for (int j = 0; j < 3; ++j) {
        if (mus[j]->empty()) continue;
        for (const auto& ch : mus[j]->chains) {
            for (std::size_t i = 0; i + 1 < ch.points.size(); ++i) {
                // trapezoid against the interpolant
                Cd za = ch.points[i], zb = ch.points[i + 1];
                double h = std::abs(zb - za);
                double wa = ch.values[i], wb = ch.values[i + 1];
                double fa = 0, fb = 0;
                for (int k = 0; k < 3; ++k) {
                    if (mus[k]->empty()) continue;
                    double bjk = B[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                    fa += bjk * mus[k]->potential(za);
                    fb += bjk * mus[k]->potential(zb);
                }
                fa += external_field(curve, j + 1, za);
                fb += external_field(curve, j + 1, zb);
                energy += 0.5 * h * (fa * wa + fb * wb);
            }
        }
    }
    rep.energy = energy;
    return rep;
}

/// S-property residual at the requested finite-difference offset (for the
/// Richardson slope diagnostics).
inline double s_property_residual(const SpectralCurve& curve, const VectorCriticalMeasure& vcm,
                                  double h, int grid = 12) {
    if (vcm.mu3.empty()) return 0;
    const auto& ch = vcm.mu3.chains.front();
    double worst = 0;
    for (int g = 0; g < grid; ++g) {
        std::size_t idx = static_cast<std::size_t>(
            (0.15 + 0.7 * double(g) / (grid - 1)) * (ch.points.size() - 1));
        Cd p = ch.points[idx];
        Cd t = ch.points[idx + 1 < ch.points.size() ? idx + 1 : idx] -
               ch.points[idx + 1 < ch.points.size() ? idx : idx - 1];
        t /= std::abs(t);
        Cd n = Cd(0, 1) * t;
        double wp = detail::combo_value(curve, vcm, 3, p + h * n);
        double wm = detail::combo_value(curve, vcm, 3, p - h * n);
        worst = std::max(worst, std::abs((wp - wm) / h));
    }
    return worst;
}

/// Riemann-Hurwitz genus bookkeeping: l-2 (unsaturated), l-1 (saturated);
/// at the singular transition the regular-side genus is reported.
inline int genus(const RegimeReport& regime, bool* singular_note = nullptr) {
    if (singular_note) *singular_note = false;
    int l = static_cast<int>(regime.support.intervals.size());
    switch (regime.kind) {
        case RegimeReport::Kind::Saturated: return l - 1;
        case RegimeReport::Kind::UnsaturatedRegular: return l - 2;
        default:
            if (singular_note) *singular_note = true;
            return (l + 1) - 2;
    }
}

// ---------------------------------------------------------------------------
// cycle periods vs masses

struct CycleCheck {
    struct Item {
        int cycle_id;
        Cd period;           // (1/2 pi i) clockwise loop integral
        double mass_combo;   // (-mu1 + mu2 + 2 mu3)(component)
        double re_sqrt_part; // |Re oint (xi2 - xi3) dz|
    };
    std::vector<Item> items;
};

/// For each connected component of Delta1 u Delta2 u Delta3, compare the
/// clockwise (1/2pi i) loop of (xi2 - xi3) with the mass combination.
inline CycleCheck boutroux_periods(const SpectralCurve& curve, const RegimeReport& regime,
                                   const VectorCriticalMeasure& vcm, const GammaStar* gamma,
                                   const PrecisionConfig& cfg) {
    // merge supports touching at x* into connected components
    struct Comp {
        double lo, hi, h;
        double mass;
    };
    std::vector<Comp> comps;
    double ymax = 0.2;
    if (gamma)
        for (const auto& p : gamma->delta3) ymax = std::max(ymax, std::abs(p.imag()));
    auto add_interval = [&](double lo, double hi, double mass) {
        for (auto& c : comps) {
            if (lo <= c.hi + 1e-9 && hi >= c.lo - 1e-9) {
                c.lo = std::min(c.lo, lo);
                c.hi = std::max(c.hi, hi);
                c.mass += mass;
                return;
            }
        }
        comps.push_back({lo, hi, 0.1, mass});
    };
    auto masses_of = [&](const DensityProfile& prof, double sign) {
        for (const auto& ch : prof.chains) {
            if (ch.points.size() < 2) continue;
            double lo = ch.points.front().real(), hi = ch.points.back().real();
            double mass = 0;
            for (std::size_t i = 0; i + 1 < ch.points.size(); ++i)
                mass += 0.5 * (ch.values[i] + ch.values[i + 1]) *
                        std::abs(ch.points[i + 1] - ch.points[i]);
            add_interval(lo, hi, sign * mass);
        }
    };
    masses_of(vcm.mu1, -1.0);
    masses_of(vcm.mu2, +1.0);
    if (!vcm.mu3.empty() && gamma) {
        double lo = 1e300, hi = -1e300;
        for (const auto& p : gamma->delta3) {
            lo = std::min(lo, p.real());
            hi = std::max(hi, p.real());
        }
        add_interval(lo, hi, 2.0 * vcm.mass3);
        for (auto& c : comps)
            if (c.lo <= hi && c.hi >= lo) c.h = std::max(c.h, ymax + 0.3);
    }

    LabeledSolver solver(curve, regime.bps.all_locations(), cfg);
    CycleCheck out;
    int id = 0;
    for (const auto& c : comps) {
        double margin = 0.15 * (1.0 + c.hi - c.lo);
        double lo = c.lo - margin, hi = c.hi + margin, h = std::max(c.h, margin);
        // shrink if another component would fall inside the rectangle
        for (const auto& o : comps) {
            if (&o == &c) continue;
            if (o.lo > c.hi) hi = std::min(hi, 0.5 * (c.hi + o.lo));
            if (o.hi < c.lo) lo = std::max(lo, 0.5 * (o.hi + c.lo));
        }
        Cd loop = loop_integral_xi23(curve, solver, lo, hi, h, cfg);
        // the walk above is counterclockwise-by-construction? orientation:
        // rectangle is traversed top-left -> top-right -> bottom-right ->
        // bottom-left -> close, which is clockwise.
        Cd period = loop / Cd(0, 2 * M_PI);
        out.items.push_back({id++, period, c.mass, std::abs(loop.real())});
    }
    return out;
}

} // namespace specurve

#endif
