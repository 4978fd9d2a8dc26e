#ifndef SPECURVE_CX_HPP
#define SPECURVE_CX_HPP

#include <cmath>
#include <complex>

namespace specurve {

/// Minimal complex type over an arbitrary real scalar.  std::complex is only
/// specified for built-in floating types, so the multiprecision paths use
/// this instead.  Division uses Smith's algorithm.
template <class R> struct Cx {
    R re{}, im{};

    Cx() = default;
    Cx(R r) : re(std::move(r)), im(R(0)) {}
    Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    Cx operator-() const { return {-re, -im}; }
    Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
    Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator*(const R& s, const Cx& b) { return {s * b.re, s * b.im}; }
    friend Cx operator*(const Cx& a, const R& s) { return {a.re * s, a.im * s}; }
    friend Cx operator/(const Cx& a, const R& s) { return {a.re / s, a.im / s}; }
    friend Cx operator/(const Cx& a, const Cx& b) {
        using std::abs;
        if (abs(b.re) >= abs(b.im)) {
            R r = b.im / b.re, d = b.re + b.im * r;
            return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
        }
        R r = b.re / b.im, d = b.re * r + b.im;
        return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
    }
    friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
};

template <class R> R abs2(const Cx<R>& z) { return z.re * z.re + z.im * z.im; }

template <class R> R abs(const Cx<R>& z) {
    using std::abs; using std::sqrt;
    R ar = abs(z.re), ai = abs(z.im);
    if (ar == R(0) && ai == R(0)) return R(0);
    if (ar >= ai) { R r = ai / ar; return ar * sqrt(R(1) + r * r); }
    R r = ar / ai;
    return ai * sqrt(R(1) + r * r);
}

template <class R> Cx<R> conj(const Cx<R>& z) { return {z.re, -z.im}; }

template <class R> Cx<R> sqrt(const Cx<R>& z) {
    using std::sqrt; using std::abs;
    R m = abs<R>(z);
    if (m == R(0)) return {R(0), R(0)};
    R w = sqrt((m + abs(z.re)) / R(2));
    if (z.re >= R(0)) {
        return {w, z.im / (R(2) * w)};
    }
    R s = z.im >= R(0) ? R(1) : R(-1);
    return {abs(z.im) / (R(2) * w), s * w};
}

} // namespace specurve

#endif
