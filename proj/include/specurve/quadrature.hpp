#ifndef SPECURVE_QUADRATURE_HPP
#define SPECURVE_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "config.hpp"
#include "mp.hpp"
#include "poly.hpp"

namespace specurve {

/// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on
/// the three-term recurrence and cached per (n, precision).
template <class R> struct GaussLegendre {
    std::vector<R> nodes, weights;

    static const GaussLegendre& get(int n) {
        static std::map<std::pair<int, int>, GaussLegendre> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(n, scalar_traits<R>::digits10());
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        return cache.emplace(key, compute(n)).first->second;
    }

    static GaussLegendre compute(int n) {
        using std::cos; using std::abs; using std::atan;
        GaussLegendre g;
        g.nodes.resize(static_cast<std::size_t>(n));
        g.weights.resize(static_cast<std::size_t>(n));
        const R pi = R(4) * atan(R(1));
        const R tol = scalar_traits<R>::eps() * R(64);
        for (int i = 0; i < n; ++i) {
            R x = cos(pi * (R(i) + R(3) / R(4)) / (R(n) + R(1) / R(2)));
            R dp(1);
            for (int it = 0; it < 200; ++it) {
                R p0(1), p1 = x;
                for (int k = 2; k <= n; ++k) {
                    R p2 = ((R(2 * k - 1) * x * p1) - R(k - 1) * p0) / R(k);
                    p0 = p1;
                    p1 = p2;
                }
                dp = R(n) * (x * p1 - p0) / (x * x - R(1));
                R dx = p1 / dp;
                x -= dx;
                if (abs(dx) <= tol * (R(1) + abs(x))) break;
            }
            g.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
            g.weights[static_cast<std::size_t>(n - 1 - i)] = R(2) / ((R(1) - x * x) * dp * dp);
        }
        return g;
    }
};

/// Integrate f over [a,b] with npanels x nnodes Gauss panels.
template <class R, class F>
R gauss_panels(F&& f, const R& a, const R& b, int npanels, int nnodes) {
    const auto& g = GaussLegendre<R>::get(nnodes);
    R total(0);
    for (int p = 0; p < npanels; ++p) {
        R lo = a + (b - a) * R(p) / R(npanels);
        R hi = a + (b - a) * R(p + 1) / R(npanels);
        R mid = (lo + hi) / R(2), half = (hi - lo) / R(2);
        R s(0);
        for (std::size_t k = 0; k < g.nodes.size(); ++k) s += g.weights[k] * f(mid + half * g.nodes[k]);
        total += s * half;
    }
    return total;
}

/// Integrate f over [a,b] adaptively: double panels until two consecutive
/// refinements agree to rel_tol.  Suited to mildly singular endpoints.
template <class R, class F>
R adaptive_gauss(F&& f, const R& a, const R& b, const R& rel_tol, int nnodes = 24,
                 int max_doublings = 14, R* err_out = nullptr) {
    using std::abs;
    R prev = gauss_panels(f, a, b, 1, nnodes);
    int panels = 2;
    for (int d = 0; d < max_doublings; ++d) {
        R cur = gauss_panels(f, a, b, panels, nnodes);
        R err = abs(cur - prev);
        if (err <= rel_tol * (abs(cur) + R(1) / R(1000000))) {
            if (err_out) *err_out = err;
            return cur;
        }
        prev = cur;
        panels *= 2;
    }
    if (err_out) *err_out = abs(prev);
    return prev;
}

/// One-sided truncation point L with N*W(L) past the precision underflow
/// budget, found by doubling plus bisection.
template <class R>
R weight_truncation(const Poly<R>& weight_exponent, const R& n_factor, int digits, bool positive_side) {
    using std::log;
    const R target = R(digits + 20) * log(R(10));
    R s = positive_side ? R(1) : R(-1);
    R L(1);
    auto val = [&](const R& x) { return n_factor * weight_exponent(x); };
    int guard = 0;
    while (val(s * L) < target) {
        L *= R(2);
        if (++guard > 400) throw std::runtime_error("weight_truncation: weight does not decay");
    }
    R lo = L / R(2), hi = L;
    for (int it = 0; it < 80; ++it) {
        R mid = (lo + hi) / R(2);
        (val(s * mid) < target ? lo : hi) = mid;
    }
    return s * hi;
}

struct WeightedIntegralInfo {
    double truncation_lo = 0, truncation_hi = 0;
    double est_rel_error = 0;
};

/// integral of f(x) * exp(-N * W(x)) dx over R, W an even-degree polynomial
/// with positive leading coefficient.  Gauss-Legendre panels on the
/// truncated interval, refined until the relative change is below tol.
template <class R, class F>
R integrate_weighted(F&& f, const Poly<R>& weight_exponent, const R& n_factor,
                     const PrecisionConfig& cfg, WeightedIntegralInfo* info = nullptr) {
    using std::abs; using std::exp; using std::pow;
    if (weight_exponent.degree() < 2 || weight_exponent.degree() % 2 != 0 ||
        !(weight_exponent.leading() > R(0)))
        throw std::invalid_argument(
            "integrate_weighted: exponent must have even degree and positive leading coefficient");
    const int digits = scalar_traits<R>::digits10();
    R lo = weight_truncation(weight_exponent, n_factor, digits, false);
    R hi = weight_truncation(weight_exponent, n_factor, digits, true);
    auto g = [&](const R& x) { return f(x) * exp(-n_factor * weight_exponent(x)); };

    // Node count grows with precision; panel count with the weight's scale.
    int nnodes = std::max(24, digits / 2 + 8);
    int panels = 8;
    R prev = gauss_panels(g, lo, hi, panels, nnodes);
    R tol = R(cfg.quad_rel_tol);
    R digit_tol = pow(R(10), -R(digits - 6));
    if (digit_tol < tol) tol = digit_tol;
    for (int d = 0; d < 12; ++d) {
        panels *= 2;
        R cur = gauss_panels(g, lo, hi, panels, nnodes);
        R err = abs(cur - prev);
        prev = cur;
        if (err <= tol * (abs(cur) + pow(R(10), -R(digits)))) {
            if (info) {
                info->truncation_lo = static_cast<double>(lo);
                info->truncation_hi = static_cast<double>(hi);
                info->est_rel_error = static_cast<double>(err / (abs(cur) + R(1)));
            }
            return cur;
        }
    }
    throw ConvergenceError("integrate_weighted: panel refinement did not converge",
                           static_cast<double>(abs(prev)));
}

/// Cached table of weight moments  M[s] = integral x^s exp(-N W(x)) dx,
/// s = 0..smax, filled in a single pass over the quadrature nodes.
template <class R> class WeightMomentTable {
  public:
    WeightMomentTable() = default;
    WeightMomentTable(const Poly<R>& weight_exponent, const R& n_factor, int smax,
                      const PrecisionConfig& cfg) {
        using std::abs; using std::exp; using std::pow;
        const int digits = scalar_traits<R>::digits10();
        R lo = weight_truncation(weight_exponent, n_factor, digits, false);
        R hi = weight_truncation(weight_exponent, n_factor, digits, true);
        int nnodes = std::max(24, digits / 2 + 8);
        int panels = 32;
        std::vector<R> prev = pass(weight_exponent, n_factor, smax, lo, hi, panels, nnodes);
        R tol = pow(R(10), -R(digits - 8));
        for (int d = 0; d < 10; ++d) {
            panels *= 2;
            std::vector<R> cur = pass(weight_exponent, n_factor, smax, lo, hi, panels, nnodes);
            R worst(0);
            for (std::size_t s = 0; s < cur.size(); ++s) {
                R scale = abs(cur[s]) + abs(cur[0]);
                worst = std::max(worst, abs(cur[s] - prev[s]) / scale);
            }
            prev = std::move(cur);
            if (worst <= tol) { m_ = std::move(prev); return; }
        }
        throw ConvergenceError("WeightMomentTable: no convergence", 0.0);
    }

    const R& operator[](std::size_t s) const {
        if (s >= m_.size()) throw std::out_of_range("WeightMomentTable: moment index");
        return m_[s];
    }
    std::size_t size() const { return m_.size(); }

    /// integral p(x) exp(-N W(x)) dx from the table.
    R poly_integral(const Poly<R>& p) const {
        R s(0);
        for (int k = 0; k <= p.degree(); ++k) s += p.coeff(k) * (*this)[static_cast<std::size_t>(k)];
        return s;
    }

  private:
    static std::vector<R> pass(const Poly<R>& w, const R& n_factor, int smax, const R& lo,
                               const R& hi, int panels, int nnodes) {
        using std::exp;
        const auto& g = GaussLegendre<R>::get(nnodes);
        std::vector<R> out(static_cast<std::size_t>(smax) + 1, R(0));
        for (int p = 0; p < panels; ++p) {
            R a = lo + (hi - lo) * R(p) / R(panels);
            R b = lo + (hi - lo) * R(p + 1) / R(panels);
            R mid = (a + b) / R(2), half = (b - a) / R(2);
            for (std::size_t k = 0; k < g.nodes.size(); ++k) {
                R x = mid + half * g.nodes[k];
                R wgt = g.weights[k] * half * exp(-n_factor * w(x));
                R xp(1);
                for (int s = 0; s <= smax; ++s) {
                    out[static_cast<std::size_t>(s)] += wgt * xp;
                    xp *= x;
                }
            }
        }
        return out;
    }

    std::vector<R> m_;
};

} // namespace specurve

#endif
