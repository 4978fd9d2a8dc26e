#ifndef SPECURVE_LINALG_HPP
#define SPECURVE_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace specurve {

/// Dense column-major matrix just big enough for the moment systems here.
template <class R> class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, R(0)) {}

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    R& operator()(std::size_t i, std::size_t j) { return a_[j * r_ + i]; }
    const R& operator()(std::size_t i, std::size_t j) const { return a_[j * r_ + i]; }

  private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<R> a_;
};

struct LuReport {
    double condition_estimate = 0; // max/min pivot magnitude ratio
};

/// Partial-pivot LU solve, in place on copies.  Throws on numerical
/// singularity; fills a crude condition proxy from the pivot spread.
template <class R>
std::vector<R> lu_solve(Matrix<R> A, std::vector<R> b, LuReport* report = nullptr) {
    using std::abs;
    const std::size_t n = A.rows();
    if (A.cols() != n || b.size() != n) throw std::invalid_argument("lu_solve: shape mismatch");
    std::vector<std::size_t> piv(n);
    R pmax(0), pmin(0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        R best = abs(A(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            R v = abs(A(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best == R(0)) throw std::runtime_error("lu_solve: singular matrix");
        if (k == 0) { pmax = best; pmin = best; }
        pmax = std::max(pmax, best);
        pmin = std::min(pmin, best);
        piv[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            R f = A(i, k) / A(k, k);
            A(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
            b[i] -= f * b[k];
        }
    }
    if (report) report->condition_estimate = static_cast<double>(pmax / pmin);
    std::vector<R> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        R s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= A(ii, j) * x[j];
        x[ii] = s / A(ii, ii);
    }
    return x;
}

} // namespace specurve

#endif
