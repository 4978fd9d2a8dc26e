#ifndef SPECURVE_ROOTS_HPP
#define SPECURVE_ROOTS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "config.hpp"
#include "cx.hpp"
#include "mp.hpp"
#include "poly.hpp"

namespace specurve {

template <class R> struct RootCluster {
    Cx<R> location;
    int multiplicity = 1;
};

namespace detail {

template <class R> Cx<R> horner(const std::vector<R>& c, const Cx<R>& z) {
    Cx<R> acc(R(0));
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + Cx<R>(*it);
    return acc;
}

// Backward-error scale max|c_k| * max(1,|z|)^deg; the max-coefficient
// normalization keeps multiple roots near the origin detectable.
template <class R> R eval_scale(const std::vector<R>& c, const R& az) {
    using std::abs; using std::pow;
    R m(0);
    for (const auto& ck : c) m = std::max(m, R(abs(ck)));
    R base = std::max(R(1), az);
    return m * pow(base, R(static_cast<int>(c.size()) - 1));
}

} // namespace detail

/// Aberth-Ehrlich simultaneous iteration for all roots of a real polynomial.
/// Residual target: |p(w)| <= root_tol * scale(w).  Throws ConvergenceError
/// carrying the worst residual if the iteration stalls.
template <class R>
std::vector<Cx<R>> aberth_roots(const Poly<R>& p, const R& root_tol, int max_iter = 400) {
    using std::abs; using std::cos; using std::sin; using std::pow; using std::atan;
    const auto& c = p.coeffs();
    const int n = p.degree();
    if (n <= 0) return {};
    if (n == 1) return {Cx<R>(-p.coeff(0) / p.coeff(1))};

    // Cauchy-style inclusion radius.
    R lead = abs(p.leading());
    R radius(0);
    for (int k = 0; k < n; ++k) {
        R t = pow(abs(c[static_cast<std::size_t>(k)]) / lead, R(1) / R(n - k));
        radius = std::max(radius, t);
    }
    radius = R(2) * radius + R(1) / R(1000);

    const R pi = R(4) * atan(R(1));
    std::vector<Cx<R>> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // slight spiral breaks symmetric stalls
        R th = R(2) * pi * R(i) / R(n) + R(1) / R(2 * n + 3);
        R rr = radius * (R(1) + R(i % 7) / R(50));
        w[static_cast<std::size_t>(i)] = Cx<R>(rr * cos(th), rr * sin(th));
    }

    Poly<R> dp = p.derivative();
    R worst(0);
    for (int iter = 0; iter < max_iter; ++iter) {
        worst = R(0);
        bool moved = false;
        for (int i = 0; i < n; ++i) {
            Cx<R>& wi = w[static_cast<std::size_t>(i)];
            Cx<R> f = detail::horner(c, wi);
            R scale = detail::eval_scale(c, abs(wi));
            R res = abs(f) / (scale > R(0) ? scale : R(1));
            worst = std::max(worst, res);
            if (res <= root_tol) continue;
            Cx<R> fd = detail::horner(dp.coeffs(), wi);
            if (abs(fd) == R(0)) fd = Cx<R>(root_tol, root_tol);
            Cx<R> newton = f / fd;
            Cx<R> sum(R(0));
            for (int j = 0; j < n; ++j)
                if (j != i) sum += Cx<R>(R(1)) / (wi - w[static_cast<std::size_t>(j)]);
            Cx<R> denom = Cx<R>(R(1)) - newton * sum;
            Cx<R> step = (abs(denom) > R(0)) ? newton / denom : newton;
            wi -= step;
            moved = true;
        }
        if (!moved) return w;
    }
    // Multiple roots converge slowly in residual but the cluster is fine;
    // accept if the residual is within a loosened bound, else report.
    R loose = root_tol * pow(R(10), R(4));
    if (worst <= loose) return w;
    throw ConvergenceError("aberth_roots: no convergence at requested precision",
                           static_cast<double>(worst));
}

/// Complex roots of a real polynomial with exact conjugate pairing:
/// near-real roots snap onto the axis, the rest are emitted as z, conj(z).
template <class R>
std::vector<Cx<R>> roots_conjugate_paired(const Poly<R>& p, const R& root_tol) {
    using std::abs;
    std::vector<Cx<R>> w = aberth_roots(p, root_tol);
    std::vector<Cx<R>> out;
    out.reserve(w.size());
    std::vector<char> used(w.size(), 0);
    R eps = scalar_traits<R>::eps();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (used[i]) continue;
        R tol = (R(1) + abs(w[i])) * std::max(root_tol, R(1000) * eps);
        if (abs(w[i].im) <= tol) {
            out.push_back(Cx<R>(w[i].re));
            used[i] = 1;
            continue;
        }
        std::size_t best = i;
        R bestd(-1);
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (j == i || used[j]) continue;
            R d = abs(w[j] - conj(w[i]));
            if (bestd < R(0) || d < bestd) { bestd = d; best = j; }
        }
        if (best != i && bestd <= R(100) * tol) {
            Cx<R> z((w[i].re + w[best].re) / R(2), (abs(w[i].im) + abs(w[best].im)) / R(2));
            if (w[i].im < R(0)) z.im = -z.im;
            out.push_back(z);
            out.push_back(conj(z));
            used[i] = used[best] = 1;
        } else {
            out.push_back(w[i]); // unpaired; caller sees the asymmetry
            used[i] = 1;
        }
    }
    return out;
}

/// Roots with clustered-root merging.  Candidate clusters are gathered with
/// a multiplicity-aware radius, their centers polished on the (m-1)-th
/// derivative, and the merge accepted only if the polished center is itself
/// a backward-stable root; otherwise the members are reported individually.
template <class R>
std::vector<RootCluster<R>> roots_with_multiplicity(const Poly<R>& p, const R& root_tol) {
    using std::abs; using std::pow;
    std::vector<Cx<R>> w = roots_conjugate_paired(p, root_tol);
    const R eps = scalar_traits<R>::eps();
    const auto& c = p.coeffs();

    std::vector<Poly<R>> derivs{p};
    for (int k = 0; k < p.degree(); ++k) derivs.push_back(derivs.back().derivative());

    auto residual_ok = [&](const Cx<R>& z, const R& budget) {
        Cx<R> f = detail::horner(c, z);
        return abs(f) <= budget * detail::eval_scale(c, abs(z));
    };

    std::vector<RootCluster<R>> clusters;
    std::vector<char> used(w.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (used[i]) continue;
        // gather a candidate cluster with a radius generous enough for the
        // m-th-root rounding spread of a degree-m multiple root
        std::vector<std::size_t> members{i};
        bool grew = true;
        while (grew) {
            grew = false;
            Cx<R> center(R(0));
            for (auto k : members) center += w[k];
            center = center / R(static_cast<int>(members.size()));
            int m = static_cast<int>(members.size());
            R radius = (R(1) + abs(center)) *
                       std::max(root_tol, R(40) * pow(eps, R(1) / R(m + 2)));
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (used[j] || j == i) continue;
                bool in = false;
                for (auto k : members)
                    if (k == j) in = true;
                if (in) continue;
                if (abs(w[j] - center) <= radius) {
                    members.push_back(j);
                    grew = true;
                }
            }
        }
        int m = static_cast<int>(members.size());
        Cx<R> center(R(0));
        for (auto k : members) center += w[k];
        center = center / R(m);
        bool merged = false;
        if (m > 1) {
            // polish the center on p^(m-1) and verify it is a genuine root
            const auto& q = derivs[static_cast<std::size_t>(m - 1)];
            const Poly<R> dq = q.derivative();
            Cx<R> z = center;
            for (int it = 0; it < 40; ++it) {
                Cx<R> f = detail::horner(q.coeffs(), z);
                Cx<R> df = detail::horner(dq.coeffs(), z);
                if (abs(df) == R(0)) break;
                Cx<R> step = f / df;
                z -= step;
                if (abs(step) <= eps * (R(1) + abs(z))) break;
            }
            if (residual_ok(z, std::max(root_tol, R(1000) * eps))) {
                center = z;
                merged = true;
            }
        }
        if (m == 1 || merged) {
            for (auto k : members) used[k] = 1;
            if (abs(center.im) <= (R(1) + abs(center)) * std::max(root_tol * R(10), R(1000) * eps))
                center.im = R(0);
            clusters.push_back({center, m});
        } else {
            used[i] = 1;
            Cx<R> z = w[i];
            if (abs(z.im) <= (R(1) + abs(z)) * std::max(root_tol * R(10), R(1000) * eps))
                z.im = R(0);
            clusters.push_back({z, 1});
        }
    }
    std::sort(clusters.begin(), clusters.end(), [](const RootCluster<R>& a, const RootCluster<R>& b) {
        if (a.location.re != b.location.re) return a.location.re < b.location.re;
        return a.location.im < b.location.im;
    });
    return clusters;
}

} // namespace specurve

#endif
