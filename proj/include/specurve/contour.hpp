#ifndef SPECURVE_CONTOUR_HPP
#define SPECURVE_CONTOUR_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "config.hpp"
#include "cx.hpp"
#include "mp.hpp"
#include "quadrature.hpp"

namespace specurve {

/// Closed-contour integral over the circle |z - center| = radius via the
/// trapezoid rule, which is geometrically convergent for integrands analytic
/// in an annulus around the circle.  Doubles the node count until two
/// refinements agree.
template <class R, class F>
Cx<R> circle_integral(F&& g, const Cx<R>& center, const R& radius, const PrecisionConfig& cfg,
                      int start_nodes = 64) {
    using std::abs; using std::cos; using std::sin; using std::atan; using std::pow;
    const R pi = R(4) * atan(R(1));
    const int digits = scalar_traits<R>::digits10();
    R tol = std::min(R(cfg.quad_rel_tol), pow(R(10), -R(digits - 8)));
    int n = start_nodes;
    Cx<R> prev(R(0));
    bool have_prev = false;
    for (int d = 0; d < 12; ++d) {
        Cx<R> s(R(0));
        for (int k = 0; k < n; ++k) {
            R th = R(2) * pi * R(k) / R(n);
            Cx<R> u(cos(th), sin(th));
            Cx<R> z = center + radius * u;
            Cx<R> dz = Cx<R>(R(0), R(1)) * u * (R(2) * pi * radius / R(n));
            s += g(z) * dz;
        }
        if (have_prev && abs(s - prev) <= tol * (abs(s) + pow(R(10), -R(digits))))
            return s;
        prev = s;
        have_prev = true;
        n *= 2;
    }
    throw ConvergenceError("circle_integral: trapezoid refinement stalled",
                           static_cast<double>(abs(prev)));
}

/// Contour integral of g along a closed polyline, Gauss panels per edge with
/// global refinement.  The path must be closed (first == last point).
template <class R, class F>
Cx<R> polyline_integral(F&& g, const std::vector<Cx<R>>& path, const PrecisionConfig& cfg,
                        bool require_closed = true) {
    using std::abs; using std::pow;
    if (path.size() < 2) throw ContractViolation("polyline_integral: path too short");
    if (require_closed && !(abs(path.front() - path.back()) <=
                            R(1e-12) * (R(1) + abs(path.front()))))
        throw ContractViolation("polyline_integral: path not closed");
    const int digits = scalar_traits<R>::digits10();
    R tol = std::min(R(cfg.quad_rel_tol), pow(R(10), -R(digits - 8)));
    const auto& gl = GaussLegendre<R>::get(16);
    int splits = 1;
    Cx<R> prev(R(0));
    bool have_prev = false;
    for (int d = 0; d < 10; ++d) {
        Cx<R> s(R(0));
        for (std::size_t e = 0; e + 1 < path.size(); ++e) {
            Cx<R> a = path[e], b = path[e + 1];
            for (int part = 0; part < splits; ++part) {
                Cx<R> lo = a + (b - a) * (R(part) / R(splits));
                Cx<R> hi = a + (b - a) * (R(part + 1) / R(splits));
                Cx<R> mid = (lo + hi) / R(2), half = (hi - lo) / R(2);
                Cx<R> acc(R(0));
                for (std::size_t k = 0; k < gl.nodes.size(); ++k)
                    acc += gl.weights[k] * g(mid + half * gl.nodes[k]);
                s += acc * half;
            }
        }
        if (have_prev && abs(s - prev) <= tol * (abs(s) + pow(R(10), -R(digits))))
            return s;
        prev = s;
        have_prev = true;
        splits *= 2;
    }
    throw ConvergenceError("polyline_integral: refinement stalled", static_cast<double>(abs(prev)));
}

} // namespace specurve

#endif
