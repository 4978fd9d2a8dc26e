#ifndef SPECURVE_MP_HPP
#define SPECURVE_MP_HPP

#include <boost/multiprecision/mpfr.hpp>

namespace specurve {

// Variable-precision real backed by MPFR.  Expression templates are off so
// the type behaves like a plain scalar in templated numerics.
using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

/// RAII guard setting the default decimal precision for mp_real.
class PrecisionGuard {
  public:
    explicit PrecisionGuard(int digits10) : saved_(mp_real::default_precision()) {
        mp_real::default_precision(static_cast<unsigned>(digits10));
    }
    ~PrecisionGuard() { mp_real::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    unsigned saved_;
};

template <class R> struct scalar_traits {
    static int digits10() { return std::numeric_limits<R>::digits10; }
    static R eps() { return std::numeric_limits<R>::epsilon(); }
};

template <> struct scalar_traits<mp_real> {
    static int digits10() { return static_cast<int>(mp_real::default_precision()); }
    static mp_real eps() {
        return pow(mp_real(10), -(digits10() - 1));
    }
};

template <class R> R from_digits(const char* s) { return R(s); }

} // namespace specurve

#endif
