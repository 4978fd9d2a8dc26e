#ifndef SPECURVE_CURVE_HPP
#define SPECURVE_CURVE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "config.hpp"
#include "geometry.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace specurve {

struct BranchPointProximity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReducibleCurveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cubic curve  F(xi,z) = xi^3 + p2(z) xi^2 + p1(z) xi + p0(z) = 0  with
/// p2 = -V'.  Everything downstream (sheets, trajectories, measures) is
/// derived from this object; it is immutable after construction.
struct SpectralCurve {
    Potential<double> V;
    double a = 1;        // source strength, > 0
    double alpha = 0.5;  // index fraction, in (0,1)
    Poly<double> p1;     // degree <= m-2
    Poly<double> p0;     // degree m-1

    Poly<double> p2() const { return V.dpoly() * (-1.0); }
    int m() const { return V.degree(); }

    /// Exact coefficient residuals of the leading-term normalization.
    std::array<double, 2> normalization_residuals() const {
        const int mm = m();
        const double vm = V.vcoeff(mm), vm1 = V.vcoeff(mm - 1);
        double r_lead = p0.coeff(mm - 1) - vm * a * a;
        double r_sub = p0.coeff(mm - 2) - (vm1 * a * a + vm * a * (2 * alpha - 1));
        return {r_lead, r_sub};
    }

    bool degrees_ok() const { return p1.degree() <= m() - 2 && p0.degree() == m() - 1; }
};

/// Gaussian-source model curve  xi^3 - z xi^2 + (1-a^2) xi + a^2 z = 0.
inline SpectralCurve pastur_curve(double a) {
    SpectralCurve c;
    c.V = Potential<double>({0.0, 1.0}); // V = z^2/2
    c.a = a;
    c.alpha = 0.5;
    c.p1 = Poly<double>{1.0 - a * a};
    c.p0 = Poly<double>{0.0, a * a};
    return c;
}

// ---------------------------------------------------------------------------
// cubic solving

/// The three roots of the monic cubic xi^3 + b xi^2 + c xi + d, Cardano with
/// Newton polish.  No ordering is implied.
inline std::array<Cd, 3> solve_cubic(const Cd& b, const Cd& c, const Cd& d) {
    const Cd third(1.0 / 3.0, 0.0);
    Cd p = c - b * b * third;
    Cd q = 2.0 * b * b * b / 27.0 - b * c * third + d;
    std::array<Cd, 3> w;
    double scale = std::max({std::abs(p), std::abs(q), 1e-300});
    if (std::abs(p) < 1e-14 * scale && std::abs(q) < 1e-14 * scale) {
        w = {Cd(0), Cd(0), Cd(0)};
    } else {
        Cd s = std::sqrt(q * q * 0.25 + p * p * p / 27.0);
        Cd u3a = -q * 0.5 + s, u3b = -q * 0.5 - s;
        Cd u3 = std::abs(u3a) >= std::abs(u3b) ? u3a : u3b;
        Cd u = std::pow(u3, third);
        const Cd omega(-0.5, std::sqrt(3.0) / 2.0);
        for (int k = 0; k < 3; ++k) {
            Cd uk = u;
            if (k == 1) uk = u * omega;
            if (k == 2) uk = u * std::conj(omega);
            Cd v = (std::abs(uk) > 0) ? -p / (3.0 * uk) : Cd(0);
            w[static_cast<std::size_t>(k)] = uk + v;
        }
    }
    for (auto& wk : w) {
        Cd xi = wk - b * third;
        for (int it = 0; it < 3; ++it) {
            Cd f = ((xi + b) * xi + c) * xi + d;
            Cd df = (3.0 * xi + 2.0 * b) * xi + c;
            if (std::abs(df) == 0) break;
            xi -= f / df;
        }
        wk = xi;
    }
    return w;
}

inline std::array<Cd, 3> curve_roots_at(const SpectralCurve& curve, const Cd& z) {
    return solve_cubic(curve.p2()(z), curve.p1(z), curve.p0(z));
}

/// Roots at real x with the conjugate structure enforced: either three reals
/// or one real plus an exact conjugate pair (pair stored as {w, conj w}).
struct RealAxisRoots {
    bool has_pair = false;
    double real_root = 0;               // valid always (smallest |Im| root)
    std::array<double, 3> reals{};      // valid when !has_pair
    Cd pair_upper;                      // Im > 0 when has_pair
};

inline RealAxisRoots curve_roots_real_axis(const SpectralCurve& curve, double x) {
    auto r = curve_roots_at(curve, Cd(x, 0));
    std::sort(r.begin(), r.end(), [](const Cd& u, const Cd& v) {
        return std::abs(u.imag()) < std::abs(v.imag());
    });
    double scale = 1.0 + std::abs(r[2]);
    RealAxisRoots out;
    if (std::abs(r[2].imag()) <= 1e-10 * scale) {
        out.has_pair = false;
        out.reals = {r[0].real(), r[1].real(), r[2].real()};
        std::sort(out.reals.begin(), out.reals.end());
        out.real_root = r[0].real();
        return out;
    }
    out.has_pair = true;
    out.real_root = r[0].real();
    Cd w = (r[1].imag() > 0) ? r[1] : r[2];
    Cd wc = (r[1].imag() > 0) ? r[2] : r[1];
    out.pair_upper = Cd((w.real() + wc.real()) / 2, (std::abs(w.imag()) + std::abs(wc.imag())) / 2);
    return out;
}

/// Discriminant of F in xi as a real polynomial in z:
/// 18 p2 p1 p0 - 4 p2^3 p0 + p2^2 p1^2 - 4 p1^3 - 27 p0^2.
inline Poly<double> discriminant_poly(const SpectralCurve& curve) {
    Poly<double> b = curve.p2();
    const Poly<double>&c = curve.p1, &d = curve.p0;
    Poly<double> out = 18.0 * (b * c * d);
    out -= 4.0 * (b * b * b * d);
    out += (b * b) * (c * c);
    out -= 4.0 * (c * c * c);
    out -= 27.0 * (d * d);
    return out;
}

// ---------------------------------------------------------------------------
// branch points

struct BranchPointInfo {
    Cd location;
    int multiplicity = 1;
    // colliding sheet labels (1-based), 0 when not annotated; sheet_a==0 and
    // triple==true marks a branch point of all three solutions
    int sheet_a = 0, sheet_b = 0;
    bool triple = false;
};

struct BranchPoints {
    std::vector<BranchPointInfo> real_points;  // ordered by location
    std::vector<BranchPointInfo> upper_pairs;  // upper representatives, conj implied
    Poly<double> disc;

    double max_modulus() const {
        double m = 0;
        for (const auto& b : real_points) m = std::max(m, std::abs(b.location));
        for (const auto& b : upper_pairs) m = std::max(m, std::abs(b.location));
        return m;
    }
    std::vector<Cd> all_locations() const {
        std::vector<Cd> v;
        for (const auto& b : real_points) v.push_back(b.location);
        for (const auto& b : upper_pairs) {
            v.push_back(b.location);
            v.push_back(std::conj(b.location));
        }
        return v;
    }
};

enum class LabelCertificate { AsymptoticAnchor, ContinuationStep };

struct RootTriple {
    Cd z;
    std::array<Cd, 3> xi; // xi[0] = xi1, ...
    LabelCertificate certificate = LabelCertificate::ContinuationStep;
};

inline double vieta_sum_residual(const SpectralCurve& curve, const RootTriple& t) {
    Cd s = t.xi[0] + t.xi[1] + t.xi[2] - curve.V.dvalue(t.z);
    double scale = 1.0 + std::abs(curve.V.dvalue(t.z));
    return std::abs(s) / scale;
}
inline double vieta_product_residual(const SpectralCurve& curve, const RootTriple& t) {
    Cd s = t.xi[0] * t.xi[1] * t.xi[2] + curve.p0(t.z);
    double scale = 1.0 + std::abs(curve.p0(t.z));
    return std::abs(s) / scale;
}

// ---------------------------------------------------------------------------
// labeled solving: anchor asymptotics + analytic continuation

/// Assigns and transports the sheet labels xi1, xi2, xi3.  Labels are fixed
/// by the series xi1 = V' - 1/z, xi2 = a + alpha/z, xi3 = -a + (1-alpha)/z on
/// an anchor circle and moved by continuation along explicit paths that keep
/// away from branch points, the real axis, and any registered cuts.
class LabeledSolver {
  public:
    LabeledSolver(const SpectralCurve& curve, std::vector<Cd> branch_locations,
                  const PrecisionConfig& cfg)
        : curve_(curve), bps_(std::move(branch_locations)), cfg_(cfg) {
        double maxbp = 0;
        for (const auto& b : bps_) maxbp = std::max(maxbp, std::abs(b));
        anchor_ = 4.0 * (1.0 + maxbp);
        // widen until the asymptotic triplet is cleanly separated
        for (int it = 0; it < 20 && !anchor_separated(); ++it) anchor_ *= 2.0;
    }

    double anchor_radius() const { return anchor_; }
    const SpectralCurve& curve() const { return curve_; }

    void set_cuts(std::vector<Polyline> cuts) { cuts_ = std::move(cuts); }
    const std::vector<Polyline>& cuts() const { return cuts_; }

    std::array<Cd, 3> asymptotic_values(const Cd& z) const {
        Cd inv = 1.0 / z;
        return {curve_.V.dvalue(z) - inv, Cd(curve_.a) + curve_.alpha * inv,
                Cd(-curve_.a) + (1.0 - curve_.alpha) * inv};
    }

    /// Labels on the anchor circle by least-squares match to the series.
    std::array<Cd, 3> labels_at_anchor(const Cd& z) const {
        auto roots = curve_roots_at(curve_, z);
        auto target = asymptotic_values(z);
        static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        double best = 1e300, second = 1e300;
        int bi = 0;
        for (int p = 0; p < 6; ++p) {
            double cost = 0;
            for (int i = 0; i < 3; ++i)
                cost += std::abs(roots[static_cast<std::size_t>(perms[p][i])] -
                                 target[static_cast<std::size_t>(i)]);
            if (cost < best) { second = best; best = cost; bi = p; }
            else second = std::min(second, cost);
        }
        if (best > 0.2 * second)
            throw InconsistencyError("LabeledSolver: ambiguous anchor labeling");
        return {roots[static_cast<std::size_t>(perms[bi][0])],
                roots[static_cast<std::size_t>(perms[bi][1])],
                roots[static_cast<std::size_t>(perms[bi][2])]};
    }

    /// Transport labels along the segment [from, to] by nearest matching with
    /// adaptive steps bounded by half the distance to the nearest branch point.
    std::array<Cd, 3> continue_labels(std::array<Cd, 3> labels, Cd from, const Cd& to) const {
        int guard = 0;
        while (std::abs(to - from) > 0) {
            if (++guard > 2000000)
                throw ConvergenceError("LabeledSolver: continuation stalled", std::abs(to - from));
            double cap = 0.45 * dist_to_branch_points(from);
            cap = std::max(cap, 1e-13 * (1.0 + std::abs(from)));
            double step = std::min(cap, std::abs(to - from));
            Cd dir = (to - from) / std::abs(to - from);
            for (;;) {
                Cd next = (step >= std::abs(to - from)) ? to : from + step * dir;
                auto roots = curve_roots_at(curve_, next);
                auto matched = match_labels(labels, roots);
                if (matched) {
                    labels = *matched;
                    from = next;
                    break;
                }
                step *= 0.5;
                if (step < 1e-14 * (1.0 + std::abs(from)))
                    throw BranchPointProximity("LabeledSolver: labels collide during continuation");
            }
        }
        return labels;
    }

    std::array<Cd, 3> continue_along(const Polyline& path) const {
        auto labels = labels_at_anchor(path.front());
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            labels = continue_labels(labels, path[i], path[i + 1]);
        return labels;
    }

    /// Labeled triple at z (off the real axis and off the cuts).
    RootTriple triple_at(const Cd& z) const {
        if (std::abs(z.imag()) == 0)
            throw ContractViolation("LabeledSolver::triple_at: z on the real axis");
        if (dist_to_branch_points(z) < proximity_radius(z))
            throw BranchPointProximity("LabeledSolver::triple_at: z at a branch point");
        Polyline path = route_to(z);
        RootTriple t;
        t.z = z;
        t.xi = continue_along(path);
        t.certificate = (path.size() == 2 && std::abs(path.front()) >= anchor_ * 0.99)
                            ? LabelCertificate::AsymptoticAnchor
                            : LabelCertificate::ContinuationStep;
        return t;
    }

    /// Boundary labels just above the axis: triple at x + i*eps.
    RootTriple triple_above(double x, double eps = 1e-7) const {
        return triple_at(Cd(x, eps));
    }

    double dist_to_branch_points(const Cd& z) const {
        double d = 1e300;
        for (const auto& b : bps_) d = std::min(d, std::abs(z - b));
        return d;
    }

    double proximity_radius(const Cd& z) const {
        return cfg_.root_tol * (1.0 + std::abs(z));
    }

    /// Monodromy permutation around a candidate branch point: perm[i] = j
    /// means the branch arriving where label i started is label j.
    std::array<int, 3> monodromy(const Cd& bp) const {
        double r = 1e300;
        for (const auto& b : bps_)
            if (std::abs(b - bp) > 1e-9 * (1.0 + std::abs(bp))) r = std::min(r, std::abs(b - bp));
        r = std::min(r / 3.0, 0.5);
        r = std::max(r, 50 * proximity_radius(bp));
        Cd start = bp + Cd(0, r);
        if (std::abs(start.imag()) < 1e-12) start = bp + Cd(r, 0);
        auto labels = continue_along(route_to(start));
        auto cur = labels;
        const int steps = 96;
        Cd prev = start;
        for (int k = 1; k <= steps; ++k) {
            double th = 2.0 * M_PI * k / steps + std::arg(start - bp);
            Cd next = bp + std::polar(r, th);
            cur = continue_labels(cur, prev, next);
            prev = next;
        }
        std::array<int, 3> perm{};
        for (int i = 0; i < 3; ++i) {
            double best = 1e300;
            int bj = i;
            for (int j = 0; j < 3; ++j) {
                double d = std::abs(cur[static_cast<std::size_t>(i)] - labels[static_cast<std::size_t>(j)]);
                if (d < best) { best = d; bj = j; }
            }
            perm[static_cast<std::size_t>(i)] = bj;
        }
        return perm;
    }

    /// Candidate route from the anchor circle to z, avoiding branch points
    /// and cuts.  Throws if no candidate clears the obstacles.
    Polyline route_to(const Cd& z) const {
        double s = (z.imag() >= 0) ? 1.0 : -1.0;
        Cd top(0, s * anchor_);
        Cd radial_start = (std::abs(z) > 1e-12) ? anchor_ * z / std::abs(z) : top;
        double xr = 1.0, xl = -1.0;
        for (const auto& cut : cuts_)
            for (const auto& p : cut) { xr = std::max(xr, p.real() + 1.0); xl = std::min(xl, p.real() - 1.0); }
        for (const auto& b : bps_) { xr = std::max(xr, b.real() + 1.0); xl = std::min(xl, b.real() - 1.0); }
        double h = std::abs(z.imag());
        std::vector<Polyline> candidates = {
            {radial_start, z},
            {top, z},
            {top, Cd(xr, s * anchor_ / 2), Cd(xr, s * h), z},
            {top, Cd(xl, s * anchor_ / 2), Cd(xl, s * h), z},
            {top, Cd(z.real(), s * anchor_ / 2), z},
        };
        for (auto& cand : candidates) {
            if (!route_clear_of_cuts(cand)) continue;
            Polyline fixed = repair_branch_clearance(cand, s);
            if (!fixed.empty() && route_clear_of_cuts(fixed)) return fixed;
        }
        throw ContractViolation("LabeledSolver: no admissible continuation route");
    }

  private:
    bool anchor_separated() const {
        for (double th : {0.3, 1.3, 2.4, -0.9, -2.1}) {
            Cd z = std::polar(anchor_, th);
            auto roots = curve_roots_at(curve_, z);
            auto target = asymptotic_values(z);
            double sep = 1e300;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    sep = std::min(sep, std::abs(target[static_cast<std::size_t>(i)] -
                                                 target[static_cast<std::size_t>(j)]));
            double drift = 0;
            for (const auto& r : roots) {
                double d = 1e300;
                for (const auto& t : target) d = std::min(d, std::abs(r - t));
                drift = std::max(drift, d);
            }
            if (drift > 0.05 * sep) return false;
        }
        return true;
    }

    static std::optional<std::array<Cd, 3>> match_labels(const std::array<Cd, 3>& prev,
                                                         const std::array<Cd, 3>& roots) {
        static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        double best = 1e300, second = 1e300;
        int bi = 0;
        for (int p = 0; p < 6; ++p) {
            double cost = 0;
            for (int i = 0; i < 3; ++i)
                cost += std::abs(roots[static_cast<std::size_t>(perms[p][i])] -
                                 prev[static_cast<std::size_t>(i)]);
            if (cost < best) { second = best; best = cost; bi = p; }
            else second = std::min(second, cost);
        }
        if (best > 0.35 * second) return std::nullopt;
        return std::array<Cd, 3>{roots[static_cast<std::size_t>(perms[bi][0])],
                                 roots[static_cast<std::size_t>(perms[bi][1])],
                                 roots[static_cast<std::size_t>(perms[bi][2])]};
    }

    bool route_clear_of_cuts(const Polyline& path) const {
        const double margin = 1e-3;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            bool last = (i + 2 == path.size());
            for (const auto& cut : cuts_) {
                double d = dist_segment_polyline(path[i], path[i + 1], cut);
                // the final hop may end close to a cut but must not cross it
                double need = last ? 0.0 : margin;
                if (d <= need) return false;
                if (last && d == 0.0) return false;
            }
        }
        return true;
    }

    /// Insert perpendicular waypoints around branch points the path grazes.
    Polyline repair_branch_clearance(const Polyline& path, double halfplane_sign) const {
        Polyline out{path.front()};
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            Cd a = path[i], b = path[i + 1];
            bool target_leg = (i + 2 == path.size());
            std::vector<Cd> way;
            for (const auto& bp : bps_) {
                double margin = 0.02 * (1.0 + std::abs(bp));
                if (target_leg && std::abs(b - bp) < margin)
                    margin = std::max(2.0 * std::abs(b - bp), 4.0 * proximity_radius(bp));
                if (std::abs(a - bp) < 1e-15) return {};
                double d = dist_point_segment(bp, a, b);
                if (d >= margin) continue;
                Cd ab = b - a;
                double t = std::clamp(((bp - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
                if (t <= 0.0 || t >= 1.0) continue;
                Cd proj = a + t * ab;
                Cd perp = Cd(0, 1) * (ab / std::abs(ab));
                double side = ((proj - bp) * std::conj(perp)).real();
                Cd away = (std::abs(side) < 1e-12 * (1.0 + std::abs(bp)))
                              ? perp * halfplane_sign
                              : (side > 0 ? perp : -perp);
                way.push_back(bp + 1.5 * margin * away);
            }
            std::sort(way.begin(), way.end(), [&](const Cd& u, const Cd& v) {
                return std::abs(u - a) < std::abs(v - a);
            });
            for (const auto& w : way) out.push_back(w);
            out.push_back(b);
        }
        return out;
    }

    const SpectralCurve& curve_;
    std::vector<Cd> bps_;
    PrecisionConfig cfg_;
    std::vector<Polyline> cuts_;
    double anchor_ = 8;
};

// ---------------------------------------------------------------------------
// branch point detection with monodromy annotations

inline BranchPoints branch_points(const SpectralCurve& curve, const PrecisionConfig& cfg) {
    BranchPoints out;
    out.disc = discriminant_poly(curve);
    if (out.disc.is_zero())
        throw ReducibleCurveError("branch_points: identically vanishing discriminant");
    auto clusters = roots_with_multiplicity(out.disc, cfg.root_tol);
    std::vector<Cd> locations;
    for (const auto& c : clusters) locations.push_back(Cd(c.location.re, c.location.im));
    LabeledSolver solver(curve, locations, cfg);
    for (const auto& c : clusters) {
        BranchPointInfo info;
        info.location = Cd(c.location.re, c.location.im);
        info.multiplicity = c.multiplicity;
        auto perm = solver.monodromy(info.location);
        int moved = 0;
        std::array<int, 3> movers{-1, -1, -1};
        for (int i = 0; i < 3; ++i)
            if (perm[static_cast<std::size_t>(i)] != i) movers[static_cast<std::size_t>(moved++)] = i;
        if (moved == 3) {
            info.triple = true;
        } else if (moved == 2) {
            info.sheet_a = movers[0] + 1;
            info.sheet_b = movers[1] + 1;
        }
        if (c.location.im > 0)
            out.upper_pairs.push_back(info);
        else if (c.location.im == 0)
            out.real_points.push_back(info);
        // lower representatives implied by conjugation
    }
    std::sort(out.real_points.begin(), out.real_points.end(),
              [](const BranchPointInfo& x, const BranchPointInfo& y) {
                  return x.location.real() < y.location.real();
              });
    return out;
}

// ---------------------------------------------------------------------------
// support and density

struct SupportInterval {
    double lo = 0, hi = 0;
    std::vector<double> interior_zeros; // even-order discriminant zeros inside
};

struct SupportSet {
    std::vector<SupportInterval> intervals;
    bool empty() const { return intervals.empty(); }
    bool contains(double x, double tol = 0) const {
        for (const auto& iv : intervals)
            if (x >= iv.lo - tol && x <= iv.hi + tol) return true;
        return false;
    }
    double lo() const { return intervals.front().lo; }
    double hi() const { return intervals.back().hi; }
};

/// supp(lambda) = closure of {x : disc_xi F(x) < 0}, from a sign scan between
/// the real discriminant roots.  Even-order interior zeros do not split an
/// interval; they are recorded instead.
inline SupportSet support(const SpectralCurve& curve, const PrecisionConfig& cfg) {
    Poly<double> disc = discriminant_poly(curve);
    if (disc.is_zero()) throw ReducibleCurveError("support: reducible curve");
    auto clusters = roots_with_multiplicity(disc, cfg.root_tol);
    std::vector<double> xs;
    for (const auto& c : clusters)
        if (c.location.im == 0) xs.push_back(c.location.re);
    std::sort(xs.begin(), xs.end());
    SupportSet out;
    if (xs.empty()) return out;
    auto sign_at = [&](double x) { return disc(x) < 0 ? -1 : 1; };
    std::vector<double> probes;
    probes.push_back(xs.front() - 1.0);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) probes.push_back(0.5 * (xs[i] + xs[i + 1]));
    probes.push_back(xs.back() + 1.0);
    std::optional<SupportInterval> open;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        bool neg_left = sign_at(probes[i]) < 0;
        bool neg_right = sign_at(probes[i + 1]) < 0;
        if (!neg_left && neg_right) {
            open = SupportInterval{xs[i], xs[i], {}};
        } else if (neg_left && !neg_right) {
            if (open) {
                open->hi = xs[i];
                out.intervals.push_back(*open);
                open.reset();
            }
        } else if (neg_left && neg_right && open) {
            open->interior_zeros.push_back(xs[i]); // even-order zero inside
        }
    }
    return out;
}

/// Density of lambda at x: (1/pi) Im xi_{1+}(x).  On the support the cubic
/// has one real root and a conjugate pair, and the labeled branch from above
/// is the pair member with positive imaginary part, so the value is label
/// free.  Returns 0 outside the support.
inline double density(const SpectralCurve& curve, double x, bool* reduced_accuracy = nullptr) {
    if (reduced_accuracy) *reduced_accuracy = false;
    auto r = curve_roots_real_axis(curve, x);
    if (!r.has_pair) return 0.0;
    return r.pair_upper.imag() / M_PI;
}

/// One-sided Richardson value for x near a branch point, stepping into the
/// support along direction `side`.
inline double density_onesided(const SpectralCurve& curve, double x, double side,
                               double h0 = 1e-5) {
    double f1 = density(curve, x + side * h0);
    double f2 = density(curve, x + side * h0 / 2);
    return 2 * f2 - f1;
}

struct AdmissibilityReport {
    bool is_admissible = false;
    bool normalization_ok = false;
    bool irreducible = false;
    double total_mass = 0;
    double min_density = 0;
    std::array<double, 2> normalization_residuals{};
    double mass_tol = 1e-6;
    std::string note;
};

/// Integrate the density over one support interval; the sine substitution
/// absorbs the square-root edge vanishing.
inline double interval_mass(const SpectralCurve& curve, const SupportInterval& iv,
                            const PrecisionConfig& cfg) {
    double mid = 0.5 * (iv.lo + iv.hi), half = 0.5 * (iv.hi - iv.lo);
    auto f = [&](double t) {
        double x = mid + half * std::sin(M_PI * t / 2);
        double jac = half * (M_PI / 2) * std::cos(M_PI * t / 2);
        return density(curve, x) * jac;
    };
    return adaptive_gauss<double>(f, -1.0, 1.0, cfg.quad_rel_tol * 0.01, 32);
}

inline AdmissibilityReport admissibility_check(const SpectralCurve& curve,
                                               const PrecisionConfig& cfg) {
    AdmissibilityReport rep;
    rep.normalization_residuals = curve.normalization_residuals();
    double coeff_scale = 1.0 + std::abs(curve.V.vcoeff(curve.m())) * curve.a * curve.a;
    rep.normalization_ok = curve.degrees_ok() &&
                           std::abs(rep.normalization_residuals[0]) <= 1e-9 * coeff_scale &&
                           std::abs(rep.normalization_residuals[1]) <= 1e-9 * coeff_scale;
    BranchPoints bps;
    try {
        bps = branch_points(curve, cfg);
    } catch (const ReducibleCurveError&) {
        rep.note = "reducible: identically vanishing discriminant";
        return rep;
    }
    // irreducibility: the monodromy group must connect all three sheets
    std::array<int, 3> comp{0, 1, 2};
    auto unite = [&](int i, int j) {
        int ci = comp[static_cast<std::size_t>(i)], cj = comp[static_cast<std::size_t>(j)];
        for (auto& c : comp)
            if (c == cj) c = ci;
    };
    auto visit = [&](const BranchPointInfo& b) {
        if (b.triple) { unite(0, 1); unite(0, 2); }
        else if (b.sheet_a > 0) unite(b.sheet_a - 1, b.sheet_b - 1);
    };
    for (const auto& b : bps.real_points) visit(b);
    for (const auto& b : bps.upper_pairs) visit(b);
    rep.irreducible = (comp[0] == comp[1] && comp[1] == comp[2]);

    SupportSet supp = support(curve, cfg);
    if (supp.empty()) {
        rep.note = "empty support";
        return rep;
    }
    double mass = 0, min_density = 1e300;
    for (const auto& iv : supp.intervals) {
        mass += interval_mass(curve, iv, cfg);
        for (int k = 1; k < 256; ++k) {
            double x = iv.lo + (iv.hi - iv.lo) * (1.0 - std::cos(M_PI * k / 256.0)) / 2.0;
            min_density = std::min(min_density, density(curve, x));
        }
    }
    rep.total_mass = mass;
    rep.min_density = min_density;
    rep.is_admissible = rep.normalization_ok && rep.irreducible &&
                        min_density >= -1e-9 && std::abs(mass - 1.0) <= rep.mass_tol;
    return rep;
}

// ---------------------------------------------------------------------------
// local behavior of the density (edges, interior zeros)

struct LocalBehavior {
    enum class Kind { Edge, InteriorInteger, Pearcey, Unresolved };
    double point = 0;
    Kind kind = Kind::Unresolved;
    int k = 0;              // Edge: exponent (2k+1)/2 ; InteriorInteger: exponent k
    int nu = 0;             // Pearcey: exponent nu/3, nu in {1,5}
    double fitted_exponent = 0;
    double fitted_constant = 0;
};

namespace detail {

/// Log-log least squares fit of density(point + side*offsets) vs offsets.
inline std::pair<double, double> fit_exponent(const SpectralCurve& curve, double point,
                                              double side, double d_lo, double d_hi) {
    std::vector<double> lx, ly;
    int n = 14;
    for (int i = 0; i < n; ++i) {
        double d = d_lo * std::pow(d_hi / d_lo, double(i) / (n - 1));
        double v = density(curve, point + side * d);
        if (v <= 0) continue;
        lx.push_back(std::log(d));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 4) return {0.0, 0.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    double nn = static_cast<double>(lx.size());
    double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    double icept = (sy - slope * sx) / nn;
    return {slope, std::exp(icept)};
}

} // namespace detail

/// Classify the density's vanishing behavior at support endpoints and
/// interior zeros (Theorem-style taxonomy: half-integer edges, integer or
/// nu/3 interior orders).  Snap tolerance 0.05 on the fitted slope.
inline std::vector<LocalBehavior> classify_local_behaviors(const SpectralCurve& curve,
                                                           const PrecisionConfig& cfg,
                                                           const SupportSet& supp,
                                                           const BranchPoints& bps,
                                                           double snap_tol = 0.05) {
    std::vector<LocalBehavior> out;
    auto snap_edge = [&](double slope) {
        int k = static_cast<int>(std::lround(slope - 0.5));
        return std::max(k, 0);
    };
    for (const auto& iv : supp.intervals) {
        double w = iv.hi - iv.lo;
        for (double side : {+1.0, -1.0}) {
            double pt = (side > 0) ? iv.lo : iv.hi;
            auto [slope, c0] = detail::fit_exponent(curve, pt, side, w * 1e-7, w * 1e-4);
            LocalBehavior lb;
            lb.point = pt;
            lb.fitted_exponent = slope;
            lb.fitted_constant = c0;
            int k = snap_edge(slope);
            if (std::abs(slope - (2 * k + 1) / 2.0) <= snap_tol) {
                lb.kind = LocalBehavior::Kind::Edge;
                lb.k = k;
            }
            out.push_back(lb);
        }
        for (double x0 : iv.interior_zeros) {
            auto [sl_r, c_r] = detail::fit_exponent(curve, x0, +1.0, w * 1e-7, w * 1e-4);
            auto [sl_l, c_l] = detail::fit_exponent(curve, x0, -1.0, w * 1e-7, w * 1e-4);
            double slope = 0.5 * (sl_r + sl_l);
            LocalBehavior lb;
            lb.point = x0;
            lb.fitted_exponent = slope;
            lb.fitted_constant = 0.5 * (c_r + c_l);
            bool triple_here = false;
            for (const auto& b : bps.real_points)
                if (b.triple && std::abs(b.location.real() - x0) <= 1e-6 * (1.0 + std::abs(x0)))
                    triple_here = true;
            double best = 1e300;
            LocalBehavior cand = lb;
            if (triple_here) {
                for (int nu : {1, 5}) {
                    double d = std::abs(slope - nu / 3.0);
                    if (d < best) { best = d; cand.kind = LocalBehavior::Kind::Pearcey; cand.nu = nu; }
                }
            }
            int ki = std::max(1, static_cast<int>(std::lround(slope)));
            if (std::abs(slope - ki) < best) {
                best = std::abs(slope - ki);
                cand.kind = LocalBehavior::Kind::InteriorInteger;
                cand.k = ki;
                cand.nu = 0;
            }
            if (best > snap_tol) cand.kind = LocalBehavior::Kind::Unresolved;
            out.push_back(cand);
        }
    }
    return out;
}

} // namespace specurve

#endif
