#ifndef SPECURVE_MOP_HPP
#define SPECURVE_MOP_HPP

#include <cmath>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "config.hpp"
#include "cx.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace specurve {

struct MultiIndex {
    int k1 = 0, k2 = 0;
    int total() const { return k1 + k2; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        return std::tie(a.k1, a.k2) < std::tie(b.k1, b.k2);
    }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.k1 == b.k1 && a.k2 == b.k2;
    }
};

/// Up-right lattice path n_0, n_1, ... with |n_k| = k, drifting to slope
/// alpha with deviation bound d (both coordinates gain at least one unit
/// over any d consecutive steps).
struct UpRightPath {
    std::vector<MultiIndex> steps;
    double alpha_target = 0.5;
    int d = 2;

    /// direction of the step n_k -> n_{k+1} (1 or 2)
    int dir(std::size_t k) const {
        return steps[k + 1].k1 > steps[k].k1 ? 1 : 2;
    }
    int perp(std::size_t k) const { return 3 - dir(k); }

    static UpRightPath toward(double alpha, int length) {
        UpRightPath p;
        p.alpha_target = alpha;
        p.steps.push_back({0, 0});
        int last_dir = 2;
        for (int k = 0; k < length; ++k) {
            const MultiIndex& n = p.steps.back();
            double target = alpha * (n.total() + 1);
            double d1 = std::abs(target - (n.k1 + 1)), d2 = std::abs(target - n.k1);
            bool take1 = d1 < d2 || (d1 == d2 && last_dir == 2); // ties alternate
            last_dir = take1 ? 1 : 2;
            p.steps.push_back(take1 ? MultiIndex{n.k1 + 1, n.k2} : MultiIndex{n.k1, n.k2 + 1});
        }
        // smallest d with n_{k+d} >= n_k + (1,1)
        for (int d = 2; d < length; ++d) {
            bool ok = true;
            for (std::size_t k = 0; k + static_cast<std::size_t>(d) < p.steps.size(); ++k) {
                const auto& a = p.steps[k];
                const auto& b = p.steps[k + static_cast<std::size_t>(d)];
                if (b.k1 < a.k1 + 1 || b.k2 < a.k2 + 1) { ok = false; break; }
            }
            if (ok) { p.d = d; break; }
        }
        return p;
    }
};

struct PartialWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class R> struct MopRecord {
    MultiIndex index;
    int N = 1;
    Poly<R> P;       // monic type II polynomial, degree |index|
    Poly<R> A1, A2;  // type I partners, degrees k_j - 1
    R gamma1{}, gamma2{};
    std::vector<R> zeros; // sorted, real and simple
    double condition_estimate = 0;
    double orthogonality_residual = 0;
};

template <class R> struct RecurrenceData {
    MultiIndex index;
    R a1{}, a2{};         // gamma ratios
    R b1{}, b2{};         // contour-integral route
    R b1_moment{}, b2_moment{};
    double nn_residual = 0;      // four-term identity at sample points
    double ab_cross_residual = 0; // contour vs moment route agreement
};

/// Multiple orthogonal polynomials for the weights exp(-N V_j),
/// V_1 = V - a x, V_2 = V + a x, over a cached index lattice.  All linear
/// algebra runs at the scalar type R (extended precision by default).
template <class R> class MopEngine {
  public:
    MopEngine(Potential<R> V, R a, int N, PrecisionConfig cfg, int max_total_degree)
        : V_(std::move(V)), a_(std::move(a)), N_(N), cfg_(cfg) {
        cfg_.validate();
        if (N < 1) throw std::invalid_argument("MopEngine: N must be positive");
        smax_ = 2 * max_total_degree + V_.degree() + 6;
        Poly<R> w1 = V_.shifted(a_);
        Poly<R> w2 = V_.shifted(-a_);
        m1_ = WeightMomentTable<R>(w1, R(N_), smax_, cfg_);
        m2_ = WeightMomentTable<R>(w2, R(N_), smax_, cfg_);
    }

    const Potential<R>& potential() const { return V_; }
    const R& source() const { return a_; }
    int big_n() const { return N_; }
    const WeightMomentTable<R>& moments(int j) const { return j == 1 ? m1_ : m2_; }

    /// Guard for the precision budget: the moment system's pivot-ratio
    /// condition estimate must stay below 10^(digits-10).
    double condition_limit() const {
        return std::pow(10.0, scalar_traits<R>::digits10() - 10);
    }

    const MopRecord<R>& record(const MultiIndex& k) {
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(k, compute(k)).first->second;
    }
    const MopRecord<R>& record(int k1, int k2) { return record(MultiIndex{k1, k2}); }

    /// integral x^s P_a(x) Q_b(x) dx via the weight moment tables.
    R mixed_moment(const MultiIndex& ka, const MultiIndex& kb, int s) {
        const auto& ra = record(ka);
        const auto& rb = record(kb);
        Poly<R> xs = Poly<R>::monomial(s);
        R out = m1_.poly_integral(xs * ra.P * rb.A1);
        out += m2_.poly_integral(xs * ra.P * rb.A2);
        return out;
    }

    R gamma_coeff(const MultiIndex& k, int j) {
        const auto& r = record(k);
        return j == 1 ? r.gamma1 : r.gamma2;
    }

    /// a^(j)_k = gamma^(j)_k / gamma^(j)_{k+e_j}
    R a_coeff(const MultiIndex& k, int j) {
        MultiIndex kp = k;
        (j == 1 ? kp.k1 : kp.k2) += 1;
        return gamma_coeff(k, j) / gamma_coeff(kp, j);
    }

    /// b^(j)_k = -(1/2 pi i) oint P_{k+e_j}(z)/P_k(z) dz/z over |z| = r with
    /// r = 1.5 max|zero| + 1 (trapezoid, geometrically convergent).
    R b_coeff_contour(const MultiIndex& k, int j) {
        MultiIndex kp = k;
        (j == 1 ? kp.k1 : kp.k2) += 1;
        const auto& rk = record(k);
        const auto& rp = record(kp);
        using std::abs; using std::cos; using std::sin; using std::atan; using std::pow;
        R radius(1);
        for (const auto& z : rk.zeros) radius = std::max(radius, R(3) / R(2) * abs(z) + R(1));
        const R pi = R(4) * atan(R(1));
        const int digits = scalar_traits<R>::digits10();
        R tol = pow(R(10), -R(digits - 8));
        int n = 256;
        R prev(0);
        bool have = false;
        for (int dd = 0; dd < 8; ++dd) {
            Cx<R> acc(R(0));
            for (int t = 0; t < n; ++t) {
                R th = R(2) * pi * R(t) / R(n);
                Cx<R> z(radius * cos(th), radius * sin(th));
                acc += rp.P(z) / rk.P(z);
            }
            R val = -acc.re / R(n);
            if (have && abs(val - prev) <= tol * (R(1) + abs(val))) return val;
            prev = val;
            have = true;
            n *= 2;
        }
        throw ConvergenceError("b_coeff_contour: trapezoid stalled", 0.0);
    }

    /// b^(j)_k = integral x P_k Q_{k+e_j} dx (moment route, cross-check)
    R b_coeff_moment(const MultiIndex& k, int j) {
        MultiIndex kp = k;
        (j == 1 ? kp.k1 : kp.k2) += 1;
        return mixed_moment(k, kp, 1);
    }

    RecurrenceData<R> recurrence_coefficients(const MultiIndex& k) {
        using std::abs;
        RecurrenceData<R> rd;
        rd.index = k;
        rd.a1 = k.k1 > 0 ? a_coeff(k, 1) : R(0);
        rd.a2 = k.k2 > 0 ? a_coeff(k, 2) : R(0);
        rd.b1 = b_coeff_contour(k, 1);
        rd.b2 = b_coeff_contour(k, 2);
        rd.b1_moment = b_coeff_moment(k, 1);
        rd.b2_moment = b_coeff_moment(k, 2);
        rd.ab_cross_residual = static_cast<double>(
            abs(rd.b1 - rd.b1_moment) + abs(rd.b2 - rd.b2_moment));
        // four-term identity x P_k = P_{k+e_j} + b_j P_k + a1 P_{k-e1} + a2 P_{k-e2}
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        double worst = 0;
        for (int j = 1; j <= 2; ++j) {
            if ((j == 1 ? k.k1 : k.k2) < 0) continue;
            MultiIndex kp = k;
            (j == 1 ? kp.k1 : kp.k2) += 1;
            const Poly<R>& pk = record(k).P;
            const Poly<R>& pp = record(kp).P;
            const Poly<R>* pm1 = k.k1 > 0 ? &record(MultiIndex{k.k1 - 1, k.k2}).P : nullptr;
            const Poly<R>* pm2 = k.k2 > 0 ? &record(MultiIndex{k.k1, k.k2 - 1}).P : nullptr;
            R b = (j == 1) ? rd.b1 : rd.b2;
            for (int t = 0; t < 20; ++t) {
                R x = R(uni(rng));
                R lhs = x * pk(x);
                R rhs = pp(x) + b * pk(x);
                if (pm1) rhs += rd.a1 * (*pm1)(x);
                if (pm2) rhs += rd.a2 * (*pm2)(x);
                worst = std::max(worst, static_cast<double>(abs(lhs - rhs)));
            }
        }
        rd.nn_residual = worst;
        if (rd.nn_residual > std::pow(10.0, -(scalar_traits<R>::digits10() - 12)) * 100)
            throw InconsistencyError("recurrence_coefficients: four-term identity failed");
        return rd;
    }

  private:
    MopRecord<R> compute(const MultiIndex& k) {
        using std::abs; using std::pow;
        MopRecord<R> rec;
        rec.index = k;
        rec.N = N_;
        const int kt = k.total();
        if (kt == 0) {
            rec.P = Poly<R>{R(1)};
            rec.gamma1 = R(0);
            rec.gamma2 = R(0);
            return rec;
        }
        if ((kt + 1) * 2 + 2 > smax_)
            throw std::invalid_argument("MopEngine: index beyond the prepared moment table");
        // monic P: coefficients c_0..c_{kt-1} from the orthogonality rows
        Matrix<R> A(static_cast<std::size_t>(kt), static_cast<std::size_t>(kt));
        std::vector<R> rhs(static_cast<std::size_t>(kt));
        std::size_t row = 0;
        for (int j = 1; j <= 2; ++j) {
            int kj = (j == 1) ? k.k1 : k.k2;
            const auto& M = (j == 1) ? m1_ : m2_;
            for (int l = 0; l < kj; ++l, ++row) {
                for (int i = 0; i < kt; ++i)
                    A(row, static_cast<std::size_t>(i)) = M[static_cast<std::size_t>(i + l)];
                rhs[row] = -M[static_cast<std::size_t>(kt + l)];
            }
        }
        LuReport lu;
        std::vector<R> c = lu_solve(A, rhs, &lu);
        rec.condition_estimate = lu.condition_estimate;
        if (lu.condition_estimate > condition_limit())
            throw ConvergenceError("compute_mop: moment system condition beyond the precision budget",
                                   lu.condition_estimate);
        c.push_back(R(1));
        rec.P = Poly<R>(std::move(c));

        // type I pair: int x^s Q = delta_{s,kt-1} for s <= kt-1
        if (k.k1 > 0 || k.k2 > 0) {
            Matrix<R> B(static_cast<std::size_t>(kt), static_cast<std::size_t>(kt));
            std::vector<R> rhs2(static_cast<std::size_t>(kt), R(0));
            rhs2[static_cast<std::size_t>(kt - 1)] = R(1);
            for (int s = 0; s < kt; ++s) {
                std::size_t col = 0;
                for (int i = 0; i < k.k1; ++i, ++col)
                    B(static_cast<std::size_t>(s), col) = m1_[static_cast<std::size_t>(s + i)];
                for (int i = 0; i < k.k2; ++i, ++col)
                    B(static_cast<std::size_t>(s), col) = m2_[static_cast<std::size_t>(s + i)];
            }
            std::vector<R> sol = lu_solve(B, rhs2);
            std::vector<R> a1(sol.begin(), sol.begin() + k.k1);
            std::vector<R> a2(sol.begin() + k.k1, sol.end());
            rec.A1 = Poly<R>(std::move(a1));
            rec.A2 = Poly<R>(std::move(a2));
            rec.gamma1 = k.k1 > 0 ? rec.A1.coeff(k.k1 - 1) : R(0);
            rec.gamma2 = k.k2 > 0 ? rec.A2.coeff(k.k2 - 1) : R(0);
        }

        // zeros: real and simple (AT-system consequence), asserted
        R rtol = pow(R(10), -R(scalar_traits<R>::digits10() - 6));
        auto zs = roots_conjugate_paired(rec.P, rtol);
        for (const auto& z : zs) {
            if (abs(z.im) > rtol * (R(1) + abs(z)) * R(1000))
                throw InconsistencyError("compute_mop: nonreal zero of a type II MOP");
            rec.zeros.push_back(z.re);
        }
        std::sort(rec.zeros.begin(), rec.zeros.end());
        for (std::size_t i = 0; i + 1 < rec.zeros.size(); ++i)
            if (!(rec.zeros[i] < rec.zeros[i + 1]))
                throw InconsistencyError("compute_mop: zeros not simple");

        // orthogonality residuals, relative to the weight scale
        double worst = 0;
        for (int j = 1; j <= 2; ++j) {
            int kj = (j == 1) ? k.k1 : k.k2;
            const auto& M = (j == 1) ? m1_ : m2_;
            for (int l = 0; l < kj; ++l) {
                Poly<R> xl = Poly<R>::monomial(l);
                R v = M.poly_integral(xl * rec.P);
                worst = std::max(worst, static_cast<double>(abs(v) / (R(1) + abs(M[0]))));
            }
        }
        rec.orthogonality_residual = worst;
        return rec;
    }

    Potential<R> V_;
    R a_;
    int N_;
    PrecisionConfig cfg_;
    int smax_;
    WeightMomentTable<R> m1_, m2_;
    std::map<MultiIndex, MopRecord<R>> cache_;
};

// ---------------------------------------------------------------------------
// path recurrences

/// Off-path expansion coefficients (base case 1, then b-difference products):
///   P_{n_k - e_perp(k-1)} = sum_i p^(i) P_{n_{k-i-1}}
///   Q_{n_k + e_perp(k)}   = sum_i q^(i) Q_{n_{k+i+1}}
template <class R> struct OffPathCoefficients {
    std::vector<R> p_list, q_list;
    double p_residual = 0; // coefficientwise polynomial identity residual
    double q_residual = 0; // pointwise identity residual
};

template <class R>
OffPathCoefficients<R> offpath_coefficients(MopEngine<R>& eng, const UpRightPath& path,
                                            std::size_t k) {
    using std::abs; using std::exp;
    if (k == 0 || k + 1 >= path.steps.size())
        throw PartialWindowError("offpath_coefficients: window exceeds the path");
    OffPathCoefficients<R> out;
    auto shift = [](MultiIndex n, int j, int by) {
        (j == 1 ? n.k1 : n.k2) += by;
        return n;
    };

    // p-side, walking down from n_k
    {
        int perp = path.perp(k - 1);
        int par = path.dir(k - 1);
        out.p_list.push_back(R(1));
        std::size_t j = 0;
        while (true) {
            if (k < j + 2) throw PartialWindowError("offpath_coefficients: path start reached");
            MultiIndex target = shift(path.steps[k - j], perp, -1);
            if (target == path.steps[k - j - 1]) break;
            MultiIndex nm = shift(path.steps[k - j - 1], perp, -1);
            R fac = eng.b_coeff_contour(nm, perp) - eng.b_coeff_contour(nm, par);
            out.p_list.push_back(out.p_list.back() * fac);
            ++j;
        }
        MultiIndex lhs_idx = shift(path.steps[k], perp, -1);
        Poly<R> resid = eng.record(lhs_idx).P;
        for (std::size_t i = 0; i < out.p_list.size(); ++i)
            resid -= out.p_list[i] * eng.record(path.steps[k - i - 1]).P;
        out.p_residual = static_cast<double>(resid.max_abs_coeff());
    }

    // q-side, walking up from n_k
    {
        int perp = path.perp(k);
        int par = path.dir(k);
        out.q_list.push_back(R(1));
        std::size_t j = 0;
        while (true) {
            if (k + j + 2 >= path.steps.size())
                throw PartialWindowError("offpath_coefficients: path end reached");
            MultiIndex target = shift(path.steps[k + j], perp, +1);
            if (target == path.steps[k + j + 1]) break;
            MultiIndex npar = shift(path.steps[k + j], par, +1);
            MultiIndex nperp = shift(path.steps[k + j], perp, +1);
            R fac = eng.b_coeff_contour(npar, perp) - eng.b_coeff_contour(nperp, par);
            out.q_list.push_back(out.q_list.back() * fac);
            ++j;
        }
        // pointwise check of the type-I identity at a few abscissas
        MultiIndex lhs_idx = shift(path.steps[k], perp, +1);
        auto qval = [&](const MultiIndex& idx, const R& x) {
            const auto& r = eng.record(idx);
            R w1 = exp(-R(eng.big_n()) * eng.potential().shifted(eng.source())(x));
            R w2 = exp(-R(eng.big_n()) * eng.potential().shifted(-eng.source())(x));
            return r.A1(x) * w1 + r.A2(x) * w2;
        };
        double worst = 0;
        for (double xd : {0.31, -0.87, 1.13}) {
            R x(xd);
            R lhs = qval(lhs_idx, x);
            R rhs(0);
            for (std::size_t i = 0; i < out.q_list.size(); ++i)
                rhs += out.q_list[i] * qval(path.steps[k + i + 1], x);
            worst = std::max(worst, static_cast<double>(abs(lhs - rhs)));
        }
        out.q_residual = worst;
    }
    return out;
}

/// d-term step recurrence along the path:
///   x P_{n_k} = P_{n_{k+1}} + sum_{l=0}^{d} theta_l P_{n_{k-l}}.
/// theta_0 is the b of the outgoing direction; the arrival-direction a lands
/// on P_{n_{k-1}}; the perpendicular a spreads through the off-path p's.
template <class R> struct StepRecurrence {
    std::vector<R> theta;
    double residual = 0;
};

template <class R>
StepRecurrence<R> step_recurrence(MopEngine<R>& eng, const UpRightPath& path, std::size_t k) {
    if (k == 0 || k + 1 >= path.steps.size())
        throw PartialWindowError("step_recurrence: window exceeds the path");
    StepRecurrence<R> out;
    const MultiIndex nk = path.steps[k];
    int out_dir = path.dir(k);
    int par = path.dir(k - 1), perp = path.perp(k - 1);
    auto off = offpath_coefficients(eng, path, k);
    out.theta.assign(static_cast<std::size_t>(path.d) + 1, R(0));
    out.theta[0] = eng.b_coeff_contour(nk, out_dir);
    R apar = (par == 1) ? eng.a_coeff(nk, 1) : eng.a_coeff(nk, 2);
    R aperp = (perp == 1) ? eng.a_coeff(nk, 1) : eng.a_coeff(nk, 2);
    out.theta[1] += apar;
    for (std::size_t i = 0; i < off.p_list.size(); ++i) {
        if (1 + i >= out.theta.size())
            throw InconsistencyError("step_recurrence: off-path depth exceeds d");
        out.theta[1 + i] += aperp * off.p_list[i];
    }
    Poly<R> resid = Poly<R>::monomial(1) * eng.record(nk).P;
    resid -= eng.record(path.steps[k + 1]).P;
    for (std::size_t l = 0; l < out.theta.size(); ++l) {
        if (k < l) break;
        resid -= out.theta[l] * eng.record(path.steps[k - l]).P;
    }
    out.residual = static_cast<double>(resid.max_abs_coeff());
    return out;
}

/// Biorthogonality integral  int P_k Q_j dx: 1 when |k| = |j| - 1, 0 in the
/// stated cones; used for the residual pattern checks.
template <class R>
R biorthogonality_integral(MopEngine<R>& eng, const MultiIndex& k, const MultiIndex& j) {
    return eng.mixed_moment(k, j, 0);
}

} // namespace specurve

#endif
