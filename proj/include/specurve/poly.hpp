#ifndef SPECURVE_POLY_HPP
#define SPECURVE_POLY_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "cx.hpp"

namespace specurve {

/// Real polynomial with coefficients stored by ascending degree.  The zero
/// polynomial is represented by an empty coefficient vector.
template <class R> class Poly {
  public:
    Poly() = default;
    Poly(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }
    explicit Poly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly monomial(int degree, R coeff = R(1)) {
        std::vector<R> c(static_cast<std::size_t>(degree) + 1, R(0));
        c.back() = coeff;
        return Poly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
    const std::vector<R>& coeffs() const { return c_; }

    R coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : R(0);
    }
    void set_coeff(int k, R v) {
        if (k < 0) throw std::invalid_argument("Poly::set_coeff: negative index");
        if (k >= static_cast<int>(c_.size())) c_.resize(static_cast<std::size_t>(k) + 1, R(0));
        c_[static_cast<std::size_t>(k)] = std::move(v);
        trim();
    }
    R leading() const { return c_.empty() ? R(0) : c_.back(); }

    template <class S> S operator()(const S& x) const {
        S acc = S(R(0));
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + S(*it);
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<R> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * R(static_cast<int>(k));
        return Poly(std::move(d));
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    Poly& operator*=(const R& s) {
        for (auto& v : c_) v *= s;
        trim();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator*(Poly a, const R& s) { a *= s; return a; }
    friend Poly operator*(const R& s, Poly a) { a *= s; return a; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<R> r(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }

    /// p(-z) with signs folded into the coefficients.
    Poly reflected() const {
        std::vector<R> r = c_;
        for (std::size_t k = 1; k < r.size(); k += 2) r[k] = -r[k];
        return Poly(std::move(r));
    }

    R max_abs_coeff() const {
        using std::abs;
        R m(0);
        for (const auto& v : c_) m = std::max(m, R(abs(v)));
        return m;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == R(0)) c_.pop_back();
    }
    std::vector<R> c_;
};

/// Polynomial potential V(z) = sum_{k=1}^m (v_k/k) z^k with V(0) = 0.
/// The model requires m even and v_m > 0 so that exp(-N V_j) is integrable.
template <class R> class Potential {
  public:
    Potential() = default;

    /// Build from the v-coefficients v_1..v_m (ascending).
    explicit Potential(std::vector<R> vcoeffs) : v_(std::move(vcoeffs)) {
        while (!v_.empty() && v_.back() == R(0)) v_.pop_back();
        if (v_.empty()) throw std::invalid_argument("Potential: V must be nonzero");
        const int m = static_cast<int>(v_.size());
        if (m < 2 || m % 2 != 0 || !(v_.back() > R(0)))
            throw std::invalid_argument("Potential: need even degree >= 2 with positive leading v");
        std::vector<R> pc(v_.size() + 1, R(0));
        for (int k = 1; k <= m; ++k) pc[static_cast<std::size_t>(k)] = v_[static_cast<std::size_t>(k - 1)] / R(k);
        poly_ = Poly<R>(std::move(pc));
        std::vector<R> dc(v_.begin(), v_.end());
        dpoly_ = Poly<R>(std::move(dc));
    }

    int degree() const { return static_cast<int>(v_.size()); }
    const std::vector<R>& vcoeffs() const { return v_; }
    R vcoeff(int k) const {
        return (k >= 1 && k <= degree()) ? v_[static_cast<std::size_t>(k - 1)] : R(0);
    }
    const Poly<R>& poly() const { return poly_; }
    const Poly<R>& dpoly() const { return dpoly_; }

    template <class S> S value(const S& x) const { return poly_(x); }
    template <class S> S dvalue(const S& x) const { return dpoly_(x); }

    /// V_j = V - a_j z with a_1 = a, a_2 = -a, and V_3 = 2 a z.
    Poly<R> shifted(const R& a_field) const {
        Poly<R> p = poly_;
        p.set_coeff(1, p.coeff(1) - a_field);
        return p;
    }

  private:
    std::vector<R> v_;
    Poly<R> poly_;
    Poly<R> dpoly_;
};

} // namespace specurve

#endif
