#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpii {

using Precision = mpfr_prec_t;

/// Everything in this library computes with at least 64 bits.
inline constexpr Precision kMinPrecision = 64;

inline Precision checked_precision(Precision prec) {
    if (prec < kMinPrecision)
        throw std::invalid_argument("precision must be at least 64 bits");
    return prec;
}

/// Arbitrary-precision real scalar.  Every value carries its own precision;
/// a binary operation rounds once, to the larger of the two operand
/// precisions (round to nearest even).  Values are immutable in spirit:
/// operations return new values, assignment replaces wholesale.
class Real {
public:
    explicit Real(Precision prec = kMinPrecision) {
        mpfr_init2(v_, checked_precision(prec));
        mpfr_set_zero(v_, 1);
    }
    Real(long x, Precision prec) {
        mpfr_init2(v_, checked_precision(prec));
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    Real(int x, Precision prec) : Real(static_cast<long>(x), prec) {}
    Real(double x, Precision prec) {
        mpfr_init2(v_, checked_precision(prec));
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    /// Parse a decimal string, correctly rounded to `prec` bits.
    Real(const std::string& decimal, Precision prec) {
        mpfr_init2(v_, checked_precision(prec));
        const char* s = decimal.c_str();
        char* end = nullptr;
        mpfr_strtofr(v_, s, &end, 10, MPFR_RNDN);
        if (end != s + decimal.size() || decimal.empty()) {
            mpfr_clear(v_);
            throw std::invalid_argument("not a valid decimal number: '" + decimal + "'");
        }
    }

    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, kMinPrecision);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    /// Exact power of two, 2^e.
    static Real pow2(long e, Precision prec = kMinPrecision) {
        Real r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    Precision precision() const { return mpfr_get_prec(v_); }

    /// Re-round to `prec` bits (exact whenever prec grows).
    Real round_to(Precision prec) const {
        Real r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    /// Binary exponent e with 2^(e-1) <= |x| < 2^e; only valid when nonzero.
    long exponent2() const { return static_cast<long>(mpfr_get_exp(v_)); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend Real operator+(const Real& a, const Real& b) {
        Real r(std::max(a.precision(), b.precision()));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, const Real& b) {
        Real r(std::max(a.precision(), b.precision()));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, const Real& b) {
        Real r(std::max(a.precision(), b.precision()));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, const Real& b) {
        Real r(std::max(a.precision(), b.precision()));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a) {
        Real r(a.precision());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend Real operator+(const Real& a, long b) {
        Real r(a.precision());
        mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator+(long a, const Real& b) { return b + a; }
    friend Real operator-(const Real& a, long b) {
        Real r(a.precision());
        mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator-(long a, const Real& b) {
        Real r(b.precision());
        mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, long b) {
        Real r(a.precision());
        mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator*(long a, const Real& b) { return b * a; }
    friend Real operator/(const Real& a, long b) {
        Real r(a.precision());
        mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator/(long a, const Real& b) {
        Real r(b.precision());
        mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) { return *this = *this + o; }
    Real& operator-=(const Real& o) { return *this = *this - o; }
    Real& operator*=(const Real& o) { return *this = *this * o; }
    Real& operator/=(const Real& o) { return *this = *this / o; }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

    friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
    friend bool operator!=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) != 0; }
    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
    friend bool operator<(long a, const Real& b) { return b > a; }
    friend bool operator>(long a, const Real& b) { return b < a; }

private:
    mpfr_t v_;
};

inline Real abs(const Real& x) {
    Real r(x.precision());
    mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline Real sqrt(const Real& x) {
    Real r(x.precision());
    mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline Real exp(const Real& x) {
    Real r(x.precision());
    mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline Real log(const Real& x) {
    Real r(x.precision());
    mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline Real cos(const Real& x) {
    Real r(x.precision());
    mpfr_cos(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline Real sin(const Real& x) {
    Real r(x.precision());
    mpfr_sin(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline std::pair<Real, Real> sin_cos(const Real& x) {
    Real s(x.precision()), c(x.precision());
    mpfr_sin_cos(s.raw(), c.raw(), x.raw(), MPFR_RNDN);
    return {std::move(s), std::move(c)};
}
inline Real pow_ui(const Real& x, unsigned long k) {
    Real r(x.precision());
    mpfr_pow_ui(r.raw(), x.raw(), k, MPFR_RNDN);
    return r;
}
/// x * 2^e, exact.
inline Real ldexp2(const Real& x, long e) {
    Real r(x.precision());
    mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
    return r;
}
inline Real pi(Precision prec) {
    Real r(prec);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}
/// Euler's number e at `prec` bits.
inline Real euler(Precision prec) {
    Real one(1L, prec);
    return exp(one);
}
inline const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
inline const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

/// Significant decimal digits that faithfully carry `prec` bits:
/// ceil(prec * log10(2)).
inline std::size_t decimal_digits_for(Precision prec) {
    mpfr_t l2, p;
    mpfr_init2(l2, 96);
    mpfr_init2(p, 96);
    mpfr_set_ui(l2, 2, MPFR_RNDN);
    mpfr_log10(l2, l2, MPFR_RNDN);
    mpfr_mul_si(p, l2, static_cast<long>(prec), MPFR_RNDU);
    long d = mpfr_get_si(p, MPFR_RNDU);
    mpfr_clear(l2);
    mpfr_clear(p);
    return static_cast<std::size_t>(std::max(d, 3L));
}

/// Canonical scientific decimal form with exactly `digits` significant
/// digits: [-]d.ddd...e±EE.  Locale independent, byte deterministic.
inline std::string to_decimal(const Real& x, std::size_t digits) {
    digits = std::max<std::size_t>(digits, 2);
    if (!x.is_finite())
        throw std::domain_error("cannot format a non-finite value");
    if (x.is_zero()) {
        std::string s = "0.";
        s.append(digits - 1, '0');
        s += "e+00";
        return s;
    }
    mpfr_exp_t e10 = 0;
    char* digs = mpfr_get_str(nullptr, &e10, 10, digits, x.raw(), MPFR_RNDN);
    if (digs == nullptr)
        throw std::runtime_error("mpfr_get_str failed");
    std::string d(digs);
    mpfr_free_str(digs);
    std::string out;
    std::size_t first = 0;
    if (!d.empty() && d[0] == '-') {
        out += '-';
        first = 1;
    }
    out += d[first];
    out += '.';
    out.append(d, first + 1, std::string::npos);
    long E = static_cast<long>(e10) - 1;
    char buf[32];
    std::snprintf(buf, sizeof buf, "e%+03ld", E);
    out += buf;
    return out;
}

}  // namespace dpii
