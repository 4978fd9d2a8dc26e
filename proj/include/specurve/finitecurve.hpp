#ifndef SPECURVE_FINITECURVE_HPP
#define SPECURVE_FINITECURVE_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "curve.hpp"
#include "mop.hpp"

namespace specurve {

/// Characteristic-polynomial coefficients of the balanced wave-equation
/// matrix: det(xi I + W) = xi^3 + q2 xi^2 + q1 xi + q0 with q2 = -V'.
template <class R> struct FiniteNCurve {
    MultiIndex index;
    int N = 1;
    Poly<R> q0, q1, q2;
    std::array<std::array<Poly<R>, 3>, 3> w_matrix;
    double trace_residual = 0;   // |tr W + V'| coefficientwise
    double lead_residual = 0;    // determinant leading-coefficient identities
};

namespace detail {

/// Polynomial part of V'(z) C[f](z) given the moments m_s(f):
///   -(sum_{r=1}^{m-1} v_{r+1} sum_{s=0}^{r-1} m_s z^{r-1-s}),  degree <= m-2.
template <class R>
Poly<R> polynomial_part(const Potential<R>& V, const std::vector<R>& moments) {
    const int m = V.degree();
    std::vector<R> out(static_cast<std::size_t>(std::max(m - 1, 1)), R(0));
    for (int r = 1; r <= m - 1; ++r) {
        R vr1 = V.vcoeff(r + 1);
        if (vr1 == R(0)) continue;
        for (int s = 0; s < r; ++s)
            out[static_cast<std::size_t>(r - 1 - s)] -= vr1 * moments[static_cast<std::size_t>(s)];
    }
    return Poly<R>(std::move(out));
}

} // namespace detail

/// Assemble the nine polynomial entries of the balanced W matrix from the
/// mixed moments int x^s P_a Q_b dx (s <= m-2), the gamma-ratio factors and
/// V'; the type-I exceptional index corrections enter the diagonal as the
/// constant source terms.  The trace and determinant leading-coefficient
/// identities are asserted to working precision.
template <class R>
FiniteNCurve<R> finite_n_curve(MopEngine<R>& eng, const MultiIndex& k) {
    using std::abs; using std::pow;
    if (k.k1 < 1 || k.k2 < 1)
        throw std::invalid_argument("finite_n_curve: both index components must be >= 1");
    const Potential<R>& V = eng.potential();
    const int m = V.degree();
    const R a = eng.source();
    FiniteNCurve<R> out;
    out.index = k;
    out.N = eng.big_n();

    auto shifted = [&](int j, int by) {
        MultiIndex n = k;
        (j == 1 ? n.k1 : n.k2) += by;
        return n;
    };
    const std::array<MultiIndex, 3> rows = {k, shifted(1, -1), shifted(2, -1)};
    const std::array<MultiIndex, 3> cols = {k, shifted(1, +1), shifted(2, +1)};
    const std::array<R, 3> afac = {R(1), eng.a_coeff(k, 1), eng.a_coeff(k, 2)};
    const std::array<R, 3> field = {R(0), a, -a};

    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            std::vector<R> moms(static_cast<std::size_t>(std::max(m - 1, 1)), R(0));
            for (int s = 0; s <= m - 2; ++s)
                moms[static_cast<std::size_t>(s)] =
                    eng.mixed_moment(rows[static_cast<std::size_t>(i)],
                                     cols[static_cast<std::size_t>(j)], s);
            Poly<R> pi = detail::polynomial_part(V, moms);
            Poly<R> entry;
            if (j == 0) {
                entry = pi;
                if (i == 0) entry -= V.dpoly();
            } else {
                entry = (-afac[static_cast<std::size_t>(j)]) * pi;
                if (i == j) entry -= Poly<R>{field[static_cast<std::size_t>(j)]};
            }
            out.w_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = entry;
        }
    }

    const auto& W = out.w_matrix;
    Poly<R> tr = W[0][0] + W[1][1] + W[2][2];
    Poly<R> tr_plus_vp = tr + V.dpoly();
    out.trace_residual = static_cast<double>(tr_plus_vp.max_abs_coeff());
    R digit_tol = pow(R(10), -R(scalar_traits<R>::digits10() - 10));
    R coeff_scale = R(1) + V.dpoly().max_abs_coeff();
    if (R(out.trace_residual) > digit_tol * coeff_scale)
        throw InconsistencyError("finite_n_curve: trace identity violated");
    out.q2 = V.dpoly() * R(-1); // exact by the trace identity

    Poly<R> tr2;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            tr2 += W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                   W[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    out.q1 = (tr * tr - tr2) * (R(1) / R(2));

    Poly<R> det = W[0][0] * (W[1][1] * W[2][2] - W[1][2] * W[2][1]);
    det -= W[0][1] * (W[1][0] * W[2][2] - W[1][2] * W[2][0]);
    det += W[0][2] * (W[1][0] * W[2][1] - W[1][1] * W[2][0]);
    out.q0 = det;

    // determinant identities: v_m a^2 and (v_{m-1} a + v_m (k1-k2)/N) a
    R vm = V.vcoeff(m), vm1 = V.vcoeff(m - 1);
    R lead = out.q0.coeff(m - 1) - vm * a * a;
    R sub = out.q0.coeff(m - 2) - (vm1 * a + vm * R(k.k1 - k.k2) / R(out.N)) * a;
    out.lead_residual = static_cast<double>(std::max(abs(lead), abs(sub)));
    if (R(out.lead_residual) > digit_tol * (R(1) + abs(vm * a * a)))
        throw InconsistencyError("finite_n_curve: determinant leading coefficients violated");
    // structural degree bounds: deg q1 <= m-2, deg q0 = m-1; anything above is
    // cancellation dust, asserted small and trimmed
    auto truncate_checked = [&](Poly<R>& q, int max_deg, const char* what) {
        std::vector<R> kept(static_cast<std::size_t>(max_deg) + 1, R(0));
        for (int t = 0; t <= q.degree(); ++t) {
            if (t <= max_deg) {
                kept[static_cast<std::size_t>(t)] = q.coeff(t);
            } else if (abs(q.coeff(t)) > digit_tol * coeff_scale) {
                throw InconsistencyError(std::string("finite_n_curve: degree bound violated for ") +
                                         what);
            }
        }
        q = Poly<R>(std::move(kept));
    };
    truncate_checked(out.q1, m - 2, "q1");
    truncate_checked(out.q0, m - 1, "q0");
    return out;
}

/// Coefficientwise residual of the wave-vector equation
///   d/dz [pi_r e^{-NV}] = N (W pi)_r,  pi = (P_k, P_{k-e1}, P_{k-e2});
/// an independent certificate that the assembled W is the ODE matrix.
template <class R>
double wave_ode_residual(MopEngine<R>& eng, const FiniteNCurve<R>& fc) {
    const MultiIndex k = fc.index;
    auto shifted = [&](int j, int by) {
        MultiIndex n = k;
        (j == 1 ? n.k1 : n.k2) += by;
        return n;
    };
    const std::array<Poly<R>, 3> pi = {eng.record(k).P, eng.record(shifted(1, -1)).P,
                                       eng.record(shifted(2, -1)).P};
    const Poly<R>& vp = eng.potential().dpoly();
    double worst = 0;
    for (int r = 0; r < 3; ++r) {
        Poly<R> lhs = pi[static_cast<std::size_t>(r)].derivative();
        lhs -= R(eng.big_n()) * (vp * pi[static_cast<std::size_t>(r)]);
        Poly<R> rhs;
        for (int c = 0; c < 3; ++c)
            rhs += fc.w_matrix[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
                   pi[static_cast<std::size_t>(c)];
        rhs *= R(eng.big_n());
        lhs -= rhs;
        worst = std::max(worst, static_cast<double>(lhs.max_abs_coeff()));
    }
    return worst;
}

/// Double-precision admissible-form curve from the finite-N coefficients
/// (alpha replaced by k1/N).
template <class R>
SpectralCurve to_spectral_curve(const Potential<R>& V, const R& a, const FiniteNCurve<R>& fc) {
    std::vector<double> v;
    for (int i = 1; i <= V.degree(); ++i) v.push_back(static_cast<double>(V.vcoeff(i)));
    SpectralCurve c;
    c.V = Potential<double>(v);
    c.a = static_cast<double>(a);
    c.alpha = double(fc.index.k1) / fc.N;
    std::vector<double> p1c, p0c;
    for (int i = 0; i <= fc.q1.degree(); ++i) p1c.push_back(static_cast<double>(fc.q1.coeff(i)));
    for (int i = 0; i <= fc.q0.degree(); ++i) p0c.push_back(static_cast<double>(fc.q0.coeff(i)));
    c.p1 = Poly<double>(p1c);
    c.p0 = Poly<double>(p0c);
    return c;
}

// ---------------------------------------------------------------------------
// convergence ladder

struct ConvergenceRow {
    int N = 0;
    MultiIndex index;
    double coeff_distance = 0;   // (q0,q1) coefficient distance to the reference
    double kolmogorov = 0;       // zero-counting CDF vs reference density CDF
    double max_abs_zero = 0;     // boundedness diagnostic
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    bool monotone_nonincreasing = true;
};

/// Cumulative distribution of the reference curve's density, tabulated once.
class DensityCdf {
  public:
    DensityCdf(const SpectralCurve& curve, const SupportSet& supp, const PrecisionConfig& cfg,
               int per_interval = 2048) {
        double total = 0;
        for (const auto& iv : supp.intervals) {
            double mid = 0.5 * (iv.lo + iv.hi), half = 0.5 * (iv.hi - iv.lo);
            std::vector<double> xs, cum;
            xs.push_back(iv.lo);
            cum.push_back(total);
            double prev_t = -1.0, acc = total;
            for (int k = 1; k <= per_interval; ++k) {
                double t = -1.0 + 2.0 * k / per_interval;
                auto f = [&](double tt) {
                    double x = mid + half * std::sin(M_PI * tt / 2);
                    return density(curve, x) * half * (M_PI / 2) * std::cos(M_PI * tt / 2);
                };
                acc += gauss_panels(f, prev_t, t, 1, 12);
                prev_t = t;
                xs.push_back(mid + half * std::sin(M_PI * t / 2));
                cum.push_back(acc);
            }
            total = acc;
            xs_.push_back(std::move(xs));
            cum_.push_back(std::move(cum));
        }
        total_ = total;
        (void)cfg;
    }

    double operator()(double x) const {
        double val = 0;
        for (std::size_t c = 0; c < xs_.size(); ++c) {
            const auto& xs = xs_[c];
            const auto& cum = cum_[c];
            if (x < xs.front()) return val / total_;
            if (x >= xs.back()) { val = cum.back(); continue; }
            auto it = std::upper_bound(xs.begin(), xs.end(), x);
            std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
            double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
            return (cum[i] + t * (cum[i + 1] - cum[i])) / total_;
        }
        return val / total_;
    }

  private:
    std::vector<std::vector<double>> xs_, cum_;
    double total_ = 1;
};

inline double kolmogorov_distance(const std::vector<double>& sorted_zeros, const DensityCdf& cdf) {
    double worst = 0;
    const double n = static_cast<double>(sorted_zeros.size());
    for (std::size_t i = 0; i < sorted_zeros.size(); ++i) {
        double F = cdf(sorted_zeros[i]);
        worst = std::max(worst, std::abs((double(i) + 1.0) / n - F));
        worst = std::max(worst, std::abs(double(i) / n - F));
    }
    return worst;
}

} // namespace specurve

#endif
