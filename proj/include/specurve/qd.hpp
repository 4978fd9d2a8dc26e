#ifndef SPECURVE_QD_HPP
#define SPECURVE_QD_HPP

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "contour.hpp"
#include "curve.hpp"

namespace specurve {

/// Quadratic differential -(xi_i - xi_j)^2 dz^2 restricted to one sheet.
/// Sheet 1 pairs (2,3), sheet 2 pairs (3,1), sheet 3 pairs (1,2).
struct SheetQD {
    const SpectralCurve* curve = nullptr;
    int sheet = 1;

    std::pair<int, int> pair() const {
        switch (sheet) {
            case 1: return {2, 3};
            case 2: return {3, 1};
            default: return {1, 2};
        }
    }
};

enum class TrajectoryKind { Vertical, Orthogonal };

struct Trajectory {
    int sheet = 1;
    TrajectoryKind kind = TrajectoryKind::Vertical;
    std::vector<Cd> points;
    Cd launch_origin;
    double launch_angle = 0;
    enum class Termination { ReachedReal, ReachedZero, Diverged, StepLimit } termination =
        Termination::StepLimit;
    double real_crossing = 0;     // valid for ReachedReal
    Cd zero_hit;                  // valid for ReachedZero
    double asymptotic_angle = 0;  // valid for Diverged
    double invariant_drift = 0;   // |d (Re or Im) int sqrt(-qd)| accumulated
    double arc_length = 0;
    std::vector<double> drifts;   // running drift per stored point
};

struct TraceOptions {
    double capture_radius_factor = 10;  // * sqrt(root_tol) * (1+|zero|)
    double escape_radius = 0;           // 0 -> 8 * anchor radius
    int max_steps = 200000;
    double real_axis_tol = 1e-9;
};

/// Regime classification of the curve.
struct RegimeReport {
    enum class Kind { Saturated, UnsaturatedRegular, UnsaturatedSingular } kind =
        Kind::UnsaturatedRegular;
    std::optional<Cd> y_star;      // saturated: the upper-half-plane zero
    std::optional<double> x_star;  // support splitting point
    std::optional<double> c_star;  // boundary critical point (unsaturated)
    int genus = 0;
    bool singular_transition_note = false;
    SupportSet support;
    BranchPoints bps;
};

struct GammaStar {
    Polyline points;      // oriented from lower to upper half plane
    double crossing = 0;  // unique intersection with the real axis
    Polyline delta3;      // sub-arc carrying mu3 (empty when unsaturated)
    Polyline tau_upper;   // orthogonal arc to Re -> +inf (upper half)
};

namespace detail {

/// Tracked (xi_i, xi_j) pair transported by nearest matching.
struct PairTracker {
    const SpectralCurve* curve;
    Cd xi_i, xi_j, xi_other;

    static PairTracker seed_nearest_pair(const SpectralCurve& curve, const Cd& z) {
        auto r = curve_roots_at(curve, z);
        int bi = 0, bj = 1;
        double best = 1e300;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                double d = std::abs(r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]);
                if (d < best) { best = d; bi = i; bj = j; }
            }
        int other = 3 - bi - bj;
        return {&curve, r[static_cast<std::size_t>(bi)], r[static_cast<std::size_t>(bj)],
                r[static_cast<std::size_t>(other)]};
    }

    static PairTracker seed_from_labels(const SpectralCurve& curve, const RootTriple& t, int i,
                                        int j) {
        int other = 3 - (i - 1) - (j - 1);
        return {&curve, t.xi[static_cast<std::size_t>(i - 1)], t.xi[static_cast<std::size_t>(j - 1)],
                t.xi[static_cast<std::size_t>(other)]};
    }

    /// Difference xi_i - xi_j at z, updating the tracked values.
    Cd advance(const Cd& z) {
        auto r = curve_roots_at(*curve, z);
        static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        double best = 1e300;
        int bp = 0;
        std::array<Cd, 3> prev{xi_i, xi_j, xi_other};
        for (int p = 0; p < 6; ++p) {
            double cost = 0;
            for (int t = 0; t < 3; ++t)
                cost += std::abs(r[static_cast<std::size_t>(perms[p][t])] -
                                 prev[static_cast<std::size_t>(t)]);
            if (cost < best) { best = cost; bp = p; }
        }
        xi_i = r[static_cast<std::size_t>(perms[bp][0])];
        xi_j = r[static_cast<std::size_t>(perms[bp][1])];
        xi_other = r[static_cast<std::size_t>(perms[bp][2])];
        return xi_i - xi_j;
    }

    Cd peek(const Cd& z) const {
        PairTracker copy = *this;
        return copy.advance(z);
    }
};

} // namespace detail

/// Zeros of the sheet's quadratic differential = points where the tracked
/// pair collides; for sheet 1 these are the discriminant zeros with a (2,3)
/// collision.
inline std::vector<Cd> sheet_zeros(const SheetQD& qd, const BranchPoints& bps) {
    std::vector<Cd> out;
    auto [i, j] = qd.pair();
    auto matches = [&](const BranchPointInfo& b) {
        if (b.triple) return true;
        int lo = std::min(i, j), hi = std::max(i, j);
        int ba = std::min(b.sheet_a, b.sheet_b), bb = std::max(b.sheet_a, b.sheet_b);
        return ba == lo && bb == hi;
    };
    for (const auto& b : bps.real_points)
        if (matches(b)) out.push_back(b.location);
    for (const auto& b : bps.upper_pairs)
        if (matches(b)) {
            out.push_back(b.location);
            out.push_back(std::conj(b.location));
        }
    return out;
}

/// Trace a trajectory of the sheet differential from `start`.
///
/// Vertical arcs keep Re int (xi_i - xi_j) dz constant (integration moves
/// along i/(xi_i-xi_j)); orthogonal arcs keep the imaginary part constant.
/// Adaptive RK with invariant-based step rejection; stops on the real axis,
/// near a zero of the differential, past the escape radius, or at the step
/// limit.
inline Trajectory trace(const SheetQD& qd, detail::PairTracker tracker, const Cd& start,
                        TrajectoryKind kind, Cd initial_direction, const PrecisionConfig& cfg,
                        const std::vector<Cd>& zeros, double escape_radius,
                        const TraceOptions& opts = {}) {
    Trajectory traj;
    traj.sheet = qd.sheet;
    traj.kind = kind;
    traj.launch_origin = start;
    traj.launch_angle = std::arg(initial_direction);
    traj.points.push_back(start);
    traj.drifts.push_back(0.0);

    const Cd rot = (kind == TrajectoryKind::Vertical) ? Cd(0, 1) : Cd(1, 0);
    auto capture_radius = [&](const Cd& zero) {
        return opts.capture_radius_factor * std::sqrt(cfg.root_tol) * (1.0 + std::abs(zero));
    };

    Cd z = start;
    Cd dir = initial_direction / std::abs(initial_direction);
    Cd diff = tracker.advance(z);
    Cd invariant(0);
    double h = 1e-3 * (1.0 + std::abs(z));
    const double drift_budget = cfg.ode_tol;

    auto field = [&](const Cd& at, detail::PairTracker& tk, const Cd& ref_dir) {
        Cd d = tk.advance(at);
        Cd v = rot * std::conj(d) / std::abs(d);
        if ((v * std::conj(ref_dir)).real() < 0) v = -v;
        return std::pair<Cd, Cd>(v, d);
    };

    auto axis_snap = [&](const Cd& at) { return opts.real_axis_tol * (1.0 + std::abs(at.real())); };
    for (int step = 0; step < opts.max_steps; ++step) {
        // terminal checks
        if (std::abs(z.imag()) <= axis_snap(z) && step > 3) {
            traj.termination = Trajectory::Termination::ReachedReal;
            traj.real_crossing = z.real();
            return traj;
        }
        for (const auto& zero : zeros) {
            if (std::abs(z - zero) <= capture_radius(zero) && step > 3) {
                traj.termination = Trajectory::Termination::ReachedZero;
                traj.zero_hit = zero;
                return traj;
            }
        }
        if (std::abs(z) >= escape_radius) {
            traj.termination = Trajectory::Termination::Diverged;
            traj.asymptotic_angle = std::arg(z);
            return traj;
        }

        // RK4 with invariant-controlled acceptance
        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            detail::PairTracker tk = tracker;
            auto [k1, d1] = field(z, tk, dir);
            detail::PairTracker tk2 = tk;
            auto [k2, d2] = field(z + 0.5 * h * k1, tk2, k1);
            detail::PairTracker tk3 = tk2;
            auto [k3, d3] = field(z + 0.5 * h * k2, tk3, k2);
            detail::PairTracker tk4 = tk3;
            auto [k4, d4] = field(z + h * k3, tk4, k3);
            Cd znew = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            // never jump across the real axis: shrink onto it instead so the
            // crossing terminates through the axis-snap check
            if ((z.imag() > 0) != (znew.imag() > 0) && std::abs(znew.imag()) > axis_snap(znew) &&
                step > 3) {
                double f = std::abs(z.imag()) / (std::abs(z.imag()) + std::abs(znew.imag()));
                h *= std::max(0.05, 0.9 * f);
                continue;
            }
            detail::PairTracker tkn = tracker;
            Cd dnew = tkn.advance(znew);
            // Simpson increment of int (xi_i - xi_j) dz along the step
            Cd mid = 0.5 * (z + znew);
            detail::PairTracker tkm = tracker;
            Cd dmid = tkm.advance(mid);
            Cd dz = znew - z;
            Cd inc = dz * (diff + 4.0 * dmid + dnew) / 6.0;
            double bad = (kind == TrajectoryKind::Vertical) ? std::abs(inc.real())
                                                            : std::abs(inc.imag());
            double min_sep = std::min({std::abs(diff), std::abs(dmid), std::abs(dnew)});
            if (bad <= drift_budget * h * (1.0 + std::abs(inc)) || h < 1e-12) {
                // direction continuity: a flip means we ran through a zero
                Cd vnew = rot * std::conj(dnew) / std::abs(dnew);
                if ((vnew * std::conj(dir)).real() < 0) vnew = -vnew;
                z = znew;
                dir = vnew;
                diff = dnew;
                tracker = tkn;
                invariant += inc;
                traj.points.push_back(z);
                traj.arc_length += std::abs(dz);
                traj.invariant_drift = (kind == TrajectoryKind::Vertical)
                                           ? std::abs(invariant.real())
                                           : std::abs(invariant.imag());
                traj.drifts.push_back(traj.invariant_drift);
                // grow step cautiously, capped by distance to zeros
                double cap = 0.35 * (1.0 + std::abs(z));
                for (const auto& zero : zeros) cap = std::min(cap, 0.5 * std::abs(z - zero) + 1e-6);
                h = std::min(1.5 * h, cap);
                if (min_sep < 1e-10) h = std::min(h, 1e-6);
                accepted = true;
            } else {
                h *= 0.5;
            }
        }
        if (!accepted) {
            traj.termination = Trajectory::Termination::StepLimit;
            return traj;
        }
    }
    traj.termination = Trajectory::Termination::StepLimit;
    return traj;
}

/// Local expansion coefficient of (xi_i - xi_j)^2 ~ c (z - zero)^q at a zero,
/// with q estimated from two radii and c from the Fourier mode.
struct LocalZeroData {
    double order = 1; // vanishing order q of (xi_i-xi_j)^2
    Cd coefficient;   // c
};

inline LocalZeroData probe_zero(const SpectralCurve& curve, const Cd& zero, double radius) {
    auto sample = [&](double r) {
        const int n = 48;
        Cd acc(0);
        double mag = 0;
        detail::PairTracker tk = detail::PairTracker::seed_nearest_pair(curve, zero + Cd(r, 0));
        Cd prevdiff = tk.xi_i - tk.xi_j;
        Cd accm(0);
        for (int k = 0; k <= n; ++k) {
            double th = 2 * M_PI * k / n;
            Cd z = zero + std::polar(r, th);
            Cd d = tk.advance(z);
            Cd g = d * d;
            if (k < n) {
                accm += g;
                mag += std::abs(g);
            }
            (void)prevdiff;
        }
        (void)acc;
        return std::pair<double, Cd>(mag / n, accm / double(n));
    };
    auto [m1, f1] = sample(radius);
    auto [m2, f2] = sample(radius / 2);
    LocalZeroData out;
    out.order = std::log(m1 / m2) / std::log(2.0);
    (void)f1;
    (void)f2;
    // c from a direct fit at fixed angle set, using the estimated order
    const int n = 32;
    detail::PairTracker tk = detail::PairTracker::seed_nearest_pair(curve, zero + Cd(radius, 0));
    Cd csum(0);
    double q = out.order;
    for (int k = 0; k < n; ++k) {
        double th = 2 * M_PI * k / n;
        Cd z = zero + std::polar(radius, th);
        Cd d = tk.advance(z);
        Cd g = d * d;
        Cd denom = std::pow(Cd(std::polar(radius, th)), Cd(q));
        csum += g / denom;
    }
    out.coefficient = csum / double(n);
    return out;
}

/// Launch the fan of trajectories from a zero of the differential.
/// A zero of order q of (xi_i-xi_j)^2 dz^2 has q+2 rays of each family in
/// the z chart; directions come from Re/Im of c^(1/2) (z-z0)^(q/2+1).
inline std::vector<Trajectory> launch_from_zero(const SheetQD& qd, const Cd& zero,
                                                int multiplicity, TrajectoryKind kind,
                                                const PrecisionConfig& cfg,
                                                const std::vector<Cd>& zeros,
                                                double escape_radius,
                                                const TraceOptions& opts = {}) {
    const SpectralCurve& curve = *qd.curve;
    double seed_r = 4.0 * opts.capture_radius_factor * std::sqrt(cfg.root_tol) *
                    (1.0 + std::abs(zero));
    LocalZeroData loc = probe_zero(curve, zero, seed_r * 4.0);
    if (std::abs(loc.order - multiplicity) > 0.35)
        throw InconsistencyError("launch_from_zero: local vanishing order mismatch");
    double q = loc.order;
    double expo = q / 2.0 + 1.0;
    double base = -std::arg(loc.coefficient) / 2.0;
    int nrays = static_cast<int>(std::lround(q)) + 2;
    std::vector<Trajectory> out;
    for (int k = 0; k < 2 * nrays + 2; ++k) {
        // vertical rays: Re[c^(1/2) r^expo e^{i expo th}] = 0 -> odd multiples
        // of pi/2; orthogonal rays: even multiples
        double phase = (kind == TrajectoryKind::Vertical) ? (M_PI / 2 + k * M_PI) : (k * M_PI);
        double th = (phase + base) / expo;
        th = std::remainder(th, 2 * M_PI);
        bool dup = false;
        for (const auto& t : out)
            if (std::abs(std::remainder(t.launch_angle - th, 2 * M_PI)) < 1e-6) dup = true;
        if (dup) continue;
        Cd start = zero + std::polar(seed_r, th);
        detail::PairTracker tk = detail::PairTracker::seed_nearest_pair(curve, start);
        Trajectory t = trace(qd, tk, start, kind, std::polar(1.0, th), cfg, zeros, escape_radius, opts);
        t.launch_origin = zero;
        t.launch_angle = th;
        out.push_back(std::move(t));
        if (static_cast<int>(out.size()) == nrays) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// regime classification

/// Saturated iff the sheet-1 differential has a zero in the open upper half
/// plane (then unique and simple); otherwise unsaturated, singular when a
/// triple branch point sits in the support interior.
inline RegimeReport classify_regime(const SpectralCurve& curve, const PrecisionConfig& cfg) {
    RegimeReport rep;
    rep.bps = branch_points(curve, cfg);
    rep.support = support(curve, cfg);
    SheetQD qd{&curve, 1};
    std::vector<Cd> upper;
    for (const auto& b : rep.bps.upper_pairs) {
        bool collides23 = b.triple || (std::min(b.sheet_a, b.sheet_b) == 2 &&
                                       std::max(b.sheet_a, b.sheet_b) == 3);
        if (collides23 && b.location.imag() > 0) upper.push_back(b.location);
    }
    if (upper.size() > 1)
        throw InconsistencyError("classify_regime: multiple sheet-1 zeros in the upper half plane");
    if (upper.size() == 1) {
        rep.kind = RegimeReport::Kind::Saturated;
        rep.y_star = upper.front();
        rep.genus = static_cast<int>(rep.support.intervals.size()) - 1;
        return rep;
    }
    // unsaturated: look for a real triple branch point inside the support
    for (const auto& b : rep.bps.real_points) {
        if (!b.triple) continue;
        double x = b.location.real();
        for (const auto& iv : rep.support.intervals) {
            if (x > iv.lo + 1e-12 && x < iv.hi - 1e-12) {
                rep.kind = RegimeReport::Kind::UnsaturatedSingular;
                rep.x_star = x;
                rep.c_star = x;
                // genus of the adjoining regular regime (component count + 1)
                rep.genus = static_cast<int>(rep.support.intervals.size()) + 1 - 2;
                rep.singular_transition_note = true;
                return rep;
            }
        }
    }
    rep.kind = RegimeReport::Kind::UnsaturatedRegular;
    rep.genus = static_cast<int>(rep.support.intervals.size()) - 2;
    return rep;
}

// ---------------------------------------------------------------------------
// Gamma* construction

/// Separator between the Delta families in the unsaturated regime: labels
/// need no cut bookkeeping there, so each support component is probed
/// directly and x* is placed midway across the separating gap.
inline double unsaturated_separator(const SpectralCurve& curve, RegimeReport& regime,
                                    const PrecisionConfig& cfg) {
    if (regime.x_star) return *regime.x_star;
    LabeledSolver solver(curve, regime.bps.all_locations(), cfg);
    double max2 = -1e300, min1 = 1e300;
    for (const auto& iv : regime.support.intervals) {
        double mid = 0.5 * (iv.lo + iv.hi);
        RootTriple t = solver.triple_above(mid, 1e-6 * (1.0 + std::abs(mid)));
        if ((t.xi[1] - t.xi[2]).imag() < 0)
            min1 = std::min(min1, iv.lo);
        else
            max2 = std::max(max2, iv.hi);
    }
    double xs;
    if (max2 == -1e300) xs = min1;
    else if (min1 == 1e300) xs = max2;
    else xs = 0.5 * (max2 + min1);
    regime.x_star = xs;
    return xs;
}

/// Saturated case: Delta3 is the projection of the vertical trajectory which
/// continues the rightward-diverging orthogonal trajectory through y*; tau*
/// is that orthogonal trajectory.  Unsaturated case: the boundary orthogonal
/// trajectory from c*.
inline GammaStar build_gamma_star(const SpectralCurve& curve, RegimeReport& regime,
                                  const PrecisionConfig& cfg) {
    SheetQD qd{&curve, 1};
    std::vector<Cd> zeros = sheet_zeros(qd, regime.bps);
    LabeledSolver probe_solver(curve, regime.bps.all_locations(), cfg);
    double escape = 8.0 * probe_solver.anchor_radius();
    GammaStar gs;

    auto conj_polyline = [](const Polyline& p) {
        Polyline q;
        q.reserve(p.size());
        for (auto it = p.rbegin(); it != p.rend(); ++it) q.push_back(std::conj(*it));
        return q;
    };

    if (regime.kind == RegimeReport::Kind::Saturated) {
        Cd ys = *regime.y_star;
        auto orth = launch_from_zero(qd, ys, 1, TrajectoryKind::Orthogonal, cfg, zeros, escape);
        const Trajectory* tau1 = nullptr;
        for (const auto& t : orth)
            if (t.termination == Trajectory::Termination::Diverged &&
                std::cos(t.asymptotic_angle) > 0.5)
                tau1 = &t;
        if (!tau1)
            throw InconsistencyError("build_gamma_star: no rightward orthogonal trajectory from y*");
        // Delta3: vertical ray opposite tau1's launch direction
        auto vert = launch_from_zero(qd, ys, 1, TrajectoryKind::Vertical, cfg, zeros, escape);
        const Trajectory* d3 = nullptr;
        double target = std::remainder(tau1->launch_angle + M_PI, 2 * M_PI);
        double best = 1e300;
        for (const auto& t : vert) {
            double d = std::abs(std::remainder(t.launch_angle - target, 2 * M_PI));
            if (d < best) { best = d; d3 = &t; }
        }
        if (!d3 || d3->termination != Trajectory::Termination::ReachedReal)
            throw ConvergenceError("build_gamma_star: trajectory from y* failed to reach the axis",
                                   0.0);
        Polyline delta_up;
        delta_up.push_back(ys);
        for (const auto& p : d3->points) delta_up.push_back(p);
        delta_up.back() = Cd(d3->real_crossing, 0);
        gs.crossing = d3->real_crossing;
        regime.x_star = gs.crossing;

        Polyline tau_up;
        tau_up.push_back(ys);
        for (const auto& p : tau1->points) tau_up.push_back(p);
        gs.tau_upper = tau_up;

        // Gamma* oriented lower -> upper: reversed conjugate of tau1 down to
        // conj(y*), the conjugate arc up through x*, the arc to y*, then tau1
        Polyline path = conj_polyline(tau_up); // far lower-right -> conj(y*)
        gs.delta3.clear();
        for (const auto& p : delta_up) gs.delta3.push_back(std::conj(p)); // conj(y*) -> x*
        for (auto it = delta_up.rbegin() + 1; it != delta_up.rend(); ++it)
            gs.delta3.push_back(*it); // x* -> y*
        path.insert(path.end(), gs.delta3.begin() + 1, gs.delta3.end());
        path.insert(path.end(), tau_up.begin() + 1, tau_up.end());
        gs.points = path;
        return gs;
    }

    // Unsaturated: launch the boundary orthogonal trajectory from c*.
    double cstar;
    if (regime.kind == RegimeReport::Kind::UnsaturatedSingular) {
        cstar = *regime.x_star;
    } else {
        double xs = unsaturated_separator(curve, regime, cfg);
        // prefer a (2,3) collision of the differential on the axis near the
        // separator; otherwise the boundary trajectory hangs off the support
        // endpoint immediately to the right of the separating gap
        std::vector<double> zr;
        for (const auto& z : zeros)
            if (z.imag() == 0) zr.push_back(z.real());
        std::sort(zr.begin(), zr.end());
        if (!zr.empty()) {
            cstar = zr.front();
            double best = 1e300;
            for (double x : zr)
                if (std::abs(x - xs) < best) { best = std::abs(x - xs); cstar = x; }
        } else {
            cstar = regime.support.hi();
            for (const auto& iv : regime.support.intervals)
                if (iv.lo >= xs - 1e-12) { cstar = iv.lo; break; }
        }
        regime.c_star = cstar;
    }

    // fan of orthogonal trajectories from c*; keep the one diverging right.
    // The sheet pair must be seeded from the labeled triple: near c* the
    // nearest two roots are a different collision.
    Cd c0(cstar, 0);
    double seed_r = 1e-4 * (1.0 + std::abs(cstar));
    const Trajectory* tau1 = nullptr;
    std::vector<Trajectory> fan;
    for (int k = 1; k < 24; ++k) {
        double th = M_PI * k / 24.0;
        Cd start = c0 + std::polar(seed_r, th);
        detail::PairTracker tk;
        try {
            RootTriple t0 = probe_solver.triple_at(start);
            tk = detail::PairTracker::seed_from_labels(curve, t0, 2, 3);
        } catch (const std::exception&) {
            continue;
        }
        Trajectory t =
            trace(qd, tk, start, TrajectoryKind::Orthogonal, std::polar(1.0, th), cfg, zeros, escape);
        t.launch_origin = c0;
        t.launch_angle = th;
        fan.push_back(std::move(t));
    }
    for (const auto& t : fan)
        if (t.termination == Trajectory::Termination::Diverged && std::cos(t.asymptotic_angle) > 0.5)
            if (!tau1) tau1 = &t;
    if (!tau1)
        throw ConvergenceError("build_gamma_star: no rightward boundary trajectory from c*", 0.0);
    Polyline up;
    up.push_back(c0);
    for (const auto& p : tau1->points) up.push_back(p);
    gs.tau_upper = up;
    gs.points = conj_polyline(up);
    gs.points.insert(gs.points.end(), up.begin() + 1, up.end());
    gs.crossing = cstar;
    return gs;
}

// ---------------------------------------------------------------------------
// cycle periods

struct CyclePeriod {
    int cycle_id = 0;
    Cd period;             // (1/2pi i) clockwise loop of (xi2 - xi3) dz
    double re_sqrt_period; // |Re oint sqrt(-qd)| over the loop
};

/// Clockwise rectangle loop around [lo,hi] x [-h,h] with labels transported
/// along the loop (start labels from the solver at the top-left corner).
inline Cd loop_integral_xi23(const SpectralCurve& curve, const LabeledSolver& solver, double lo,
                             double hi, double h, const PrecisionConfig& cfg) {
    Polyline loop = {Cd(lo, h), Cd(hi, h), Cd(hi, -h), Cd(lo, -h), Cd(lo, h)};
    RootTriple t0 = solver.triple_at(loop.front());
    detail::PairTracker tk = detail::PairTracker::seed_from_labels(curve, t0, 2, 3);
    Cd total(0);
    for (std::size_t e = 0; e + 1 < loop.size(); ++e) {
        Cd a = loop[e], b = loop[e + 1];
        int n = 600;
        Cd prev_val = tk.peek(a);
        tk.advance(a);
        Cd acc(0);
        for (int k = 1; k <= n; ++k) {
            Cd z = a + (b - a) * (double(k) / n);
            Cd val = tk.advance(z);
            acc += (prev_val + val) * 0.5 * ((b - a) / double(n));
            prev_val = val;
        }
        total += acc;
    }
    (void)cfg;
    return total;
}

} // namespace specurve

#endif
