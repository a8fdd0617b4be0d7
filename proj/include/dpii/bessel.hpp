#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "dpii/errors.hpp"
#include "dpii/real.hpp"

namespace dpii {

/// I_0(t)..I_N(t), all positive and strictly decreasing for t > 0.
struct BesselSequence {
    Real t;
    std::vector<Real> values;

    BesselSequence(Real t_in, std::vector<Real> vals)
        : t(std::move(t_in)), values(std::move(vals)) {
        if (!(t > 0L))
            throw std::domain_error("BesselSequence requires t > 0");
        for (std::size_t n = 0; n < values.size(); ++n) {
            if (!(values[n] > 0L))
                throw std::invalid_argument("Bessel values must be positive");
            if (n > 0 && !(values[n] < values[n - 1]))
                throw std::invalid_argument("Bessel values must decrease strictly in the order");
        }
    }
    long max_index() const { return static_cast<long>(values.size()) - 1; }
};

/// Trigonometric moments mu_0..mu_N; mu_0 == 1 exactly, entries in [0, 1],
/// non-increasing.  (For t > 0 the genuine sequences are strictly positive
/// and strictly decreasing; the producing operations enforce that.)
struct MomentSequence {
    Real t;
    std::vector<Real> mu;

    MomentSequence(Real t_in, std::vector<Real> moments)
        : t(std::move(t_in)), mu(std::move(moments)) {
        if (mu.empty() || mu[0] != 1L)
            throw std::invalid_argument("mu_0 must be exactly 1");
        for (std::size_t n = 1; n < mu.size(); ++n) {
            if (mu[n] < 0L || mu[n] > 1L)
                throw std::invalid_argument("moments must lie in [0, 1]");
            if (mu[n] > mu[n - 1])
                throw std::invalid_argument("moments must be non-increasing");
        }
    }
    long max_index() const { return static_cast<long>(mu.size()) - 1; }
};

/// I_n(t) for n in {0, 1} by the ascending power series
///   I_0(t) = sum (t/2)^{2k} / (k!)^2,  I_1(t) = sum (t/2)^{2k+1} / (k!(k+1)!).
/// Terms are positive; summation stops once the next term falls below one
/// unit in the last place of the partial sum.
inline Real bessel_i_series(int order, const Real& t, Precision prec) {
    if (order != 0 && order != 1)
        throw std::invalid_argument("bessel_i_series handles orders 0 and 1 only");
    checked_precision(prec);
    if (!(t > 0L))
        throw std::domain_error("bessel_i_series requires t > 0");

    const Precision pw = prec + 48;
    const Real x = t.round_to(pw);
    const Real half = x / 2L;
    const Real q = half * half;

    Real term = (order == 0) ? Real(1L, pw) : half;
    Real sum = term;
    for (long k = 1; k <= 100000000L; ++k) {
        term = term * q / (k * (k + order));
        sum = sum + term;
        if (term.exponent2() < sum.exponent2() - pw)
            return sum.round_to(prec);
    }
    throw ConvergenceFailure("ascending Bessel series did not terminate");
}

/// r_n(t) = I_{n+1}(t)/I_n(t) in (0, 1), evaluated as the backward continued
/// fraction r_j = 1/(2(j+1)/t + r_{j+1}) seeded with 0 at depth n+D; D is
/// doubled until two successive evaluations agree to the target precision.
inline Real bessel_ratio_cf(long n, const Real& t, Precision prec,
                            long depth_cap = (1L << 22)) {
    if (n < 0)
        throw std::invalid_argument("bessel_ratio_cf requires n >= 0");
    checked_precision(prec);
    if (!(t > 0L))
        throw std::domain_error("bessel_ratio_cf requires t > 0");

    const Precision pw = prec + 32;
    const Real x = t.round_to(pw);
    const Real agree = Real::pow2(-(prec + 12), pw);

    Real prev(pw);
    bool have_prev = false;
    for (long depth = 32;; depth *= 2) {
        if (depth > depth_cap)
            throw ConvergenceFailure(
                "Bessel ratio continued fraction did not stabilize within the depth cap");
        Real r(pw);  // plays r_{n+depth}, seeded as 0
        for (long j = n + depth - 1; j >= n; --j)
            r = 1L / (Real(2 * (j + 1), pw) / x + r);
        if (have_prev && abs(r - prev) <= agree * r)
            return r.round_to(prec);
        prev = std::move(r);
        have_prev = true;
    }
}

/// I_0(t)..I_N(t) by backward recurrence through
///   y_{nu-1} = y_{nu+1} + (2 nu / t) y_nu
/// from a trial seed high above N, normalized against the series value of
/// I_0.  The start offset is doubled until the delivered I_N stabilizes.
inline BesselSequence bessel_sequence_miller(const Real& t, long N, Precision prec) {
    if (N < 0)
        throw std::invalid_argument("bessel_sequence_miller requires N >= 0");
    checked_precision(prec);
    if (!(t > 0L))
        throw std::domain_error("bessel_sequence_miller requires t > 0");

    const Precision pw = prec + 48;
    const Real x = t.round_to(pw);
    const Real anchor = bessel_i_series(0, t, pw);
    if (N == 0)
        return BesselSequence(t.round_to(prec), {anchor.round_to(prec)});

    const Real agree = Real::pow2(-(prec + 24), pw);
    Real prev_tail(pw);
    bool have_prev = false;
    long start_off = std::max<long>({16L, N / 2, static_cast<long>(t.to_double()) + 8});
    for (;; start_off *= 2) {
        if (start_off > (1L << 22))
            throw PrecisionExhausted("backward Bessel recurrence did not stabilize");
        const long start = N + start_off;
        std::vector<Real> y(static_cast<std::size_t>(N) + 1, Real(pw));
        Real above(pw);         // y_{nu+1}
        Real cur(1L, pw);       // y_nu
        for (long nu = start; nu >= 1; --nu) {
            Real below = above + Real(2 * nu, pw) / x * cur;
            above = std::move(cur);
            cur = std::move(below);
            if (nu - 1 <= N)
                y[static_cast<std::size_t>(nu - 1)] = cur;
        }
        if (have_prev && abs(y[N] * (anchor / cur) - prev_tail) <= agree * prev_tail) {
            const Real scale = anchor / cur;
            std::vector<Real> out;
            out.reserve(y.size());
            out.push_back(anchor.round_to(prec));
            for (long k = 1; k <= N; ++k)
                out.push_back((y[static_cast<std::size_t>(k)] * scale).round_to(prec));
            return BesselSequence(t.round_to(prec), std::move(out));
        }
        prev_tail = y[N] * (anchor / cur);
        have_prev = true;
    }
}

/// mu_n = I_n(t)/I_0(t); mu_0 is exactly 1.
inline MomentSequence moments_from_bessel(const Real& t, long N, Precision prec) {
    checked_precision(prec);
    const Precision pw = prec + 24;
    BesselSequence seq = bessel_sequence_miller(t, N, pw);
    std::vector<Real> mu;
    mu.reserve(static_cast<std::size_t>(N) + 1);
    mu.push_back(Real(1L, prec));
    for (long n = 1; n <= N; ++n)
        mu.push_back((seq.values[static_cast<std::size_t>(n)] / seq.values[0]).round_to(prec));
    for (long n = 1; n <= N; ++n) {
        if (!(mu[static_cast<std::size_t>(n)] > 0L) ||
            !(mu[static_cast<std::size_t>(n)] < mu[static_cast<std::size_t>(n) - 1]))
            throw PrecisionExhausted(
                "moment tail fell below working precision; raise the precision");
    }
    return MomentSequence(t.round_to(prec), std::move(mu));
}

/// Large-order approximant (2 pi n)^(-1/2) (e t / 2n)^n.  Sanity cross-check
/// only; never used in the main computation path.
inline Real bessel_asymptotic(long n, const Real& t) {
    if (n < 1)
        throw std::invalid_argument("bessel_asymptotic requires n >= 1");
    if (!(t > 0L))
        throw std::domain_error("bessel_asymptotic requires t > 0");
    const Precision p = std::max(t.precision(), kMinPrecision);
    const Real base = euler(p) * t / (2 * n);
    return pow_ui(base, static_cast<unsigned long>(n)) / sqrt(2 * n * pi(p));
}

}  // namespace dpii
