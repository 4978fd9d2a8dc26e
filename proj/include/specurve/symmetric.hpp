#ifndef SPECURVE_SYMMETRIC_HPP
#define SPECURVE_SYMMETRIC_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "measures.hpp"

namespace specurve {

/// Parity certificate: p_k(-z) = (-1)^{k+1} p_k(z) for k = 0,1,2, i.e. p0
/// and p2 odd, p1 even.  Residuals are the magnitudes of the offending
/// coefficients (zero for a symmetric curve).
struct SymmetricCertificate {
    bool is_symmetric = false;
    std::vector<double> residuals;
};

inline SymmetricCertificate check_symmetry(const SpectralCurve& curve) {
    SymmetricCertificate cert;
    auto collect = [&](const Poly<double>& p, int parity_keep) {
        // parity_keep = 1: odd coefficients survive; 0: even survive
        for (int k = 0; k <= p.degree(); ++k)
            if (k % 2 != parity_keep) cert.residuals.push_back(std::abs(p.coeff(k)));
    };
    collect(curve.p0, 1);
    collect(curve.p1, 0);
    collect(curve.p2(), 1);
    double scale = 1e-12 * (1.0 + curve.p0.max_abs_coeff() + curve.p1.max_abs_coeff());
    cert.is_symmetric = true;
    for (double r : cert.residuals)
        if (r > scale) cert.is_symmetric = false;
    return cert;
}

// ---------------------------------------------------------------------------
// constrained pair (nu1, nu2)

/// nu2 lives on the imaginary axis: equal to the constraint sigma = a/pi on
/// [-y*, y*] and strictly below it outside; nu1 = lambda on R.
struct ConstrainedPair {
    DensityProfile nu1;       // = mu1 + mu2 profile on R
    double y_star = 0;        // 0 in the unsaturated regime
    double sigma_level = 0;   // a / pi
    std::vector<double> ys;   // sample heights > y_star
    std::vector<double> rho;  // nu2 density per arclength at ys
    double mass_nu1 = 0;
    double mass_nu2 = 0;
    double grid_span = 0;
    double tail_cutoff = 0;   // beyond this height the c/y^2 model is used
    double tail_coeff = 0;    // c in rho ~ c / y^2

    /// density of nu2 at height y (exact evaluation through the curve)
    std::function<double(double)> density_at;
};

namespace detail {

/// (xi2 - xi3)(iy) for a symmetric curve: twice the positive real part of
/// the conjugate-negative root pair (label free on the axis of symmetry).
inline double xi23_diff_on_axis(const SpectralCurve& curve, double y) {
    auto r = curve_roots_at(curve, Cd(0, y));
    double m = 0;
    for (const auto& root : r) m = std::max(m, root.real());
    return 2.0 * m;
}

/// Geometric panels toward the singular endpoint 0 for integrands with an
/// integrable log singularity there.
template <class F> double graded_panels_to_zero(F&& f, double b, int levels = 44, int nodes = 16) {
    double total = 0;
    double hi = b;
    for (int k = 0; k < levels; ++k) {
        double lo = hi / 2;
        total += gauss_panels(f, lo, hi, 1, nodes);
        hi = lo;
    }
    return total;
}

} // namespace detail

/// Assemble the constrained pair from the closed-form densities
///   nu2' = a/pi on (-y*, y*),   nu2' = (2a - (xi2 - xi3)(iy)) / (2 pi) outside,
/// with nu1 = lambda.  Masses are integrated with an exact 1/y tail map.
inline ConstrainedPair build_constrained_pair(const SpectralCurve& curve,
                                              const RegimeReport& regime,
                                              const VectorCriticalMeasure& vcm,
                                              const PrecisionConfig& cfg, int grid_points = 1200,
                                              double grid_span = 10.0) {
    SymmetricCertificate cert = check_symmetry(curve);
    if (!cert.is_symmetric)
        throw ContractViolation("build_constrained_pair: curve is not symmetric");

    ConstrainedPair pair;
    pair.sigma_level = curve.a / M_PI;
    pair.y_star = (regime.kind == RegimeReport::Kind::Saturated) ? regime.y_star->imag() : 0.0;
    pair.grid_span = grid_span;

    pair.nu1.chains = vcm.mu1.chains;
    for (const auto& ch : vcm.mu2.chains) pair.nu1.chains.push_back(ch);
    pair.nu1.mass = vcm.mass1 + vcm.mass2;
    pair.mass_nu1 = pair.nu1.mass;

    const double a = curve.a;
    SpectralCurve ccopy = curve;
    pair.density_at = [ccopy, a](double y) {
        double d = detail::xi23_diff_on_axis(ccopy, std::abs(y));
        return (2.0 * a - d) / (2.0 * M_PI);
    };

    // composite grid: square-root grading absorbs the kink at y*, then an
    // exponential stretch out to the window edge
    const double ys0 = pair.y_star;
    double sigma = pair.sigma_level;
    const double near_w = std::min(2.0 * (1.0 + ys0), 0.5 * (grid_span - ys0));
    const int n_near = grid_points / 2, n_far = grid_points - n_near;
    std::vector<double> heights;
    for (int k = 0; k < n_near; ++k) {
        double t = double(k) / n_near;
        heights.push_back(ys0 + near_w * (1.0 - std::cos(M_PI * t / 2)));
    }
    for (int k = 0; k <= n_far; ++k) {
        double t = double(k) / n_far;
        heights.push_back(ys0 + near_w +
                          (grid_span - ys0 - near_w) * (std::exp(3.0 * t) - 1.0) /
                              (std::exp(3.0) - 1.0));
    }
    for (std::size_t k = 0; k < heights.size(); ++k) {
        double y = heights[k];
        double rho = (k == 0 && ys0 > 0) ? sigma : pair.density_at(y);
        if (rho > sigma + 1e-9)
            throw InconsistencyError("build_constrained_pair: nu2 exceeds the constraint");
        pair.ys.push_back(y);
        pair.rho.push_back(std::max(rho, 0.0));
    }

    // The density decays like the Cauchy-transform tail c/y^2; beyond the
    // cutoff the fitted model replaces curve solves, whose cancellation noise
    // would otherwise be amplified by 1/y^2.
    pair.tail_cutoff = 2000.0;
    double c_a = pair.density_at(500.0) * 500.0 * 500.0;
    double c_b = pair.density_at(1000.0) * 1000.0 * 1000.0;
    pair.tail_coeff = c_b + (c_b - c_a) / 3.0; // one Richardson step in 1/y^2

    double mass = 2.0 * sigma * ys0;
    double y_mid = std::max(4.0 * (1.0 + ys0), 10.0);
    mass += 2.0 * adaptive_gauss<double>([&](double y) { return pair.density_at(y); }, ys0, y_mid,
                                         cfg.quad_rel_tol * 0.01, 32);
    mass += 2.0 * adaptive_gauss<double>(
                      [&](double u) { return pair.density_at(1.0 / u) / (u * u); },
                      1.0 / pair.tail_cutoff, 1.0 / y_mid, cfg.quad_rel_tol * 0.01, 32);
    mass += 2.0 * pair.tail_coeff / pair.tail_cutoff;
    pair.mass_nu2 = mass;
    return pair;
}

/// Logarithmic potential of nu2 at z: exact constant-density segment on
/// [-y*, y*], exact linear panels on the sampled window, and a graded
/// integration of the mapped tail.
inline double nu2_potential(const ConstrainedPair& pair, const Cd& z) {
    double total = 0;
    if (pair.y_star > 0) {
        DensityProfile seg;
        DensityProfile::Chain ch;
        ch.points = {Cd(0, -pair.y_star), Cd(0, pair.y_star)};
        ch.values = {pair.sigma_level, pair.sigma_level};
        seg.chains.push_back(ch);
        total += seg.potential(z);
    }
    DensityProfile win;
    DensityProfile::Chain up, down;
    for (std::size_t i = 0; i < pair.ys.size(); ++i) {
        up.points.push_back(Cd(0, pair.ys[i]));
        up.values.push_back(pair.rho[i]);
        down.points.push_back(Cd(0, -pair.ys[i]));
        down.values.push_back(pair.rho[i]);
    }
    win.chains = {up, down};
    total += win.potential(z);
    // mid tail grid_span < |y| < cutoff, mapped through u = 1/y
    auto mid_tail = [&](double u) {
        double y = 1.0 / u;
        double rho = pair.density_at(y);
        double kern = std::log(std::abs(Cd(0, y) - z)) + std::log(std::abs(Cd(0, -y) - z));
        return -rho * kern / (u * u);
    };
    total += adaptive_gauss<double>(mid_tail, 1.0 / pair.tail_cutoff, 1.0 / pair.grid_span,
                                    1e-10, 24);
    // far tail via the c/y^2 model: the 1/y^2 jacobian cancels exactly
    auto far_tail = [&](double u) {
        double kern = std::log(std::abs(Cd(0, 1.0 / u) - z)) +
                      std::log(std::abs(Cd(0, -1.0 / u) - z));
        return -pair.tail_coeff * kern;
    };
    total += detail::graded_panels_to_zero(far_tail, 1.0 / pair.tail_cutoff);
    return total;
}

// ---------------------------------------------------------------------------
// piecewise H function and the potential form of the balayage identity

/// H agrees with U^{nu2}: H1 = U^{mu1} - U^{mu3} on the left region, H2 =
/// U^{mu2} + U^{mu3} on the right half plane, H3 = H2 + 2 a Re z inside the
/// lens bounded by Delta3 and [-y*, y*].
struct HFunction {
    const SpectralCurve* curve = nullptr;
    const VectorCriticalMeasure* vcm = nullptr;
    Polyline lens; // closed loop: Delta3 then back up the imaginary segment

    bool in_lens(const Cd& z) const {
        if (lens.size() < 3) return false;
        return point_in_polygon(z, lens);
    }
    int domain_of(const Cd& z) const {
        if (z.real() > 0) return 2;
        if (in_lens(z)) return 3;
        return 1;
    }
    double value(const Cd& z, int domain = 0) const {
        if (domain == 0) domain = domain_of(z);
        switch (domain) {
            case 1: return vcm->mu1.potential(z) - (vcm->mu3.empty() ? 0.0 : vcm->mu3.potential(z));
            case 2: return vcm->mu2.potential(z) + (vcm->mu3.empty() ? 0.0 : vcm->mu3.potential(z));
            default:
                return vcm->mu2.potential(z) + (vcm->mu3.empty() ? 0.0 : vcm->mu3.potential(z)) +
                       2.0 * curve->a * z.real();
        }
    }
};

inline HFunction make_h_function(const SpectralCurve& curve, const VectorCriticalMeasure& vcm,
                                 const GammaStar* gamma, double y_star) {
    HFunction h;
    h.curve = &curve;
    h.vcm = &vcm;
    if (gamma && y_star > 0 && gamma->delta3.size() >= 2) {
        h.lens = gamma->delta3; // conj(y*) -> x* -> y*
        h.lens.push_back(Cd(0, y_star));
        h.lens.push_back(Cd(0, -y_star));
    }
    return h;
}

struct TheoremCReport {
    double equality_max = 0;     // |2 U^nu2 - U^nu1| off the saturated segment
    double inequality_slack = 0; // U^nu1 - 2 U^nu2 at i y*/2 (positive = strict)
    double balayage_max = 0;     // |U^nu2 - H| over the three domains
    double h_continuity_max = 0; // piecewise H mismatch across interfaces
    int grid_used = 0;
};

/// Checks of the constrained equilibrium identities in potential form.
inline TheoremCReport verify_theorem_c(const SpectralCurve& curve, const ConstrainedPair& pair,
                                       const VectorCriticalMeasure& vcm, const GammaStar* gamma,
                                       const PrecisionConfig& cfg) {
    TheoremCReport rep;
    // U^{nu1} through adaptive quadrature of the true density; the sine map
    // absorbs the square-root edges
    auto u_nu1 = [&](const Cd& z) {
        double total = 0;
        SupportSet supp = support(curve, cfg);
        for (const auto& iv : supp.intervals) {
            double mid = 0.5 * (iv.lo + iv.hi), half = 0.5 * (iv.hi - iv.lo);
            auto f = [&](double t) {
                double x = mid + half * std::sin(M_PI * t / 2);
                double jac = half * (M_PI / 2) * std::cos(M_PI * t / 2);
                return -density(curve, x) * std::log(std::abs(Cd(x, 0) - z)) * jac;
            };
            total += adaptive_gauss<double>(f, -1.0, 1.0, 1e-11, 32);
        }
        return total;
    };

    // (i) equality 2 U^{nu2} = U^{nu1} on iR away from [-y*, y*]
    double y0 = pair.y_star;
    for (int k = 0; k < 24; ++k) {
        double y = (y0 + 0.05 * (1.0 + y0)) * std::pow(1.35, k);
        if (y > 0.8 * pair.grid_span) break;
        Cd z(0, y);
        double r = std::abs(2.0 * nu2_potential(pair, z) - u_nu1(z));
        rep.equality_max = std::max(rep.equality_max, r);
        ++rep.grid_used;
    }
    // (ii) strict inequality inside the saturated segment
    if (y0 > 0) {
        Cd z(0, y0 / 2);
        rep.inequality_slack = u_nu1(z) - 2.0 * nu2_potential(pair, z);
    }
    // (iii) balayage in potential form: U^{nu2} = H piecewise
    HFunction h = make_h_function(curve, vcm, gamma, y0);
    std::vector<Cd> grid;
    double sc = 1.0 + std::abs(vcm.x_star.value_or(1.0));
    for (double r : {0.4, 0.9, 1.7}) {
        for (int k = 0; k < 10; ++k) {
            double th = 2 * M_PI * (k + 0.35) / 10;
            grid.push_back(Cd(2.2 * sc * r * std::cos(th), 1.4 * sc * r * std::sin(th)));
        }
    }
    if (y0 > 0 && gamma) {
        // a few interior lens points along the imaginary segment's left side
        for (double f : {0.25, 0.5, 0.75})
            grid.push_back(Cd(-0.1 * std::abs(gamma->crossing), f * y0 - y0 / 2));
    }
    for (const auto& z : grid) {
        double clearance =
            std::min({vcm.mu1.empty() ? 1e300 : vcm.mu1.min_distance(z),
                      vcm.mu2.empty() ? 1e300 : vcm.mu2.min_distance(z),
                      vcm.mu3.empty() ? 1e300 : vcm.mu3.min_distance(z), std::abs(z.real()) + 1.0});
        if (clearance < 5e-2) continue;
        double r = std::abs(nu2_potential(pair, z) - h.value(z));
        rep.balayage_max = std::max(rep.balayage_max, r);
        ++rep.grid_used;
    }
    // interface continuity of the piecewise H
    auto probe_iface = [&](const Cd& p, int dom_a, int dom_b) {
        double r = std::abs(h.value(p, dom_a) - h.value(p, dom_b));
        rep.h_continuity_max = std::max(rep.h_continuity_max, r);
    };
    if (y0 > 0) {
        for (double f : {0.3, 0.6, 0.9}) probe_iface(Cd(0, f * y0), 2, 3);
        if (gamma) {
            auto mids = resample_polyline(gamma->delta3, {0.3, 0.5, 0.7});
            for (const auto& p : mids) probe_iface(p, 1, 3);
        }
    }
    for (double f : {1.3, 2.0, 3.5})
        probe_iface(Cd(0, y0 + f * (1.0 + y0)), 1, 2);
    return rep;
}

} // namespace specurve

#endif
