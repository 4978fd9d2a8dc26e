#ifndef SPECURVE_GEOMETRY_HPP
#define SPECURVE_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace specurve {

using Cd = std::complex<double>;
using Polyline = std::vector<Cd>;

inline double cross(const Cd& a, const Cd& b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double dist_point_segment(const Cd& p, const Cd& a, const Cd& b) {
    Cd ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

inline bool segments_intersect(const Cd& a1, const Cd& a2, const Cd& b1, const Cd& b2) {
    auto orient = [](const Cd& p, const Cd& q, const Cd& r) {
        double v = cross(q - p, r - p);
        double scale = std::abs(q - p) * std::abs(r - p) + 1e-300;
        if (v > 1e-14 * scale) return 1;
        if (v < -1e-14 * scale) return -1;
        return 0;
    };
    int o1 = orient(a1, a2, b1), o2 = orient(a1, a2, b2);
    int o3 = orient(b1, b2, a1), o4 = orient(b1, b2, a2);
    if (o1 != o2 && o3 != o4) return true;
    auto on = [&](const Cd& p, const Cd& q, const Cd& r) {
        return orient(p, q, r) == 0 && std::min(p.real(), q.real()) - 1e-14 <= r.real() &&
               r.real() <= std::max(p.real(), q.real()) + 1e-14 &&
               std::min(p.imag(), q.imag()) - 1e-14 <= r.imag() &&
               r.imag() <= std::max(p.imag(), q.imag()) + 1e-14;
    };
    return on(a1, a2, b1) || on(a1, a2, b2) || on(b1, b2, a1) || on(b1, b2, a2);
}

inline double dist_segment_polyline(const Cd& a, const Cd& b, const Polyline& poly) {
    double best = 1e300;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        if (segments_intersect(a, b, poly[i], poly[i + 1])) return 0.0;
        best = std::min(best, dist_point_segment(poly[i], a, b));
        best = std::min(best, dist_point_segment(poly[i + 1], a, b));
        best = std::min(best, dist_point_segment(a, poly[i], poly[i + 1]));
        best = std::min(best, dist_point_segment(b, poly[i], poly[i + 1]));
    }
    return best;
}

inline double dist_point_polyline(const Cd& p, const Polyline& poly) {
    double best = 1e300;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
        best = std::min(best, dist_point_segment(p, poly[i], poly[i + 1]));
    if (poly.size() == 1) best = std::min(best, std::abs(p - poly[0]));
    return best;
}

inline double polyline_length(const Polyline& poly) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) s += std::abs(poly[i + 1] - poly[i]);
    return s;
}

/// Even-odd point-in-polygon test; the polygon is given as a closed loop
/// (last point joined back to the first).
inline bool point_in_polygon(const Cd& p, const Polyline& loop) {
    bool inside = false;
    std::size_t n = loop.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Cd& a = loop[i];
        const Cd& b = loop[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (p.real() < x) inside = !inside;
        }
    }
    return inside;
}

/// Resample a polyline at the given arclength fractions (in [0,1]).
inline Polyline resample_polyline(const Polyline& poly, const std::vector<double>& fractions) {
    double total = polyline_length(poly);
    Polyline out;
    out.reserve(fractions.size());
    for (double f : fractions) {
        double target = std::clamp(f, 0.0, 1.0) * total;
        double acc = 0;
        Cd pt = poly.back();
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
            double seg = std::abs(poly[i + 1] - poly[i]);
            if (acc + seg >= target || i + 2 == poly.size()) {
                double t = seg > 0 ? std::clamp((target - acc) / seg, 0.0, 1.0) : 0.0;
                pt = poly[i] + t * (poly[i + 1] - poly[i]);
                break;
            }
            acc += seg;
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace specurve

#endif
