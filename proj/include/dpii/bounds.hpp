#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpii/errors.hpp"
#include "dpii/painleve.hpp"
#include "dpii/real.hpp"

namespace dpii {
namespace detail {

/// m!! as an exact integer; (-1)!! = 0!! = 1.
inline mpz_class double_factorial(long m) {
    if (m < -1)
        throw std::invalid_argument("double factorial needs m >= -1");
    mpz_class r = 1;
    for (long k = m; k >= 2; k -= 2)
        r *= k;
    return r;
}

/// Exact rational value of a (binary) Real.
inline mpq_class rational_from_real(const Real& x) {
    if (!x.is_finite())
        throw std::invalid_argument("cannot convert a non-finite value to a rational");
    if (x.is_zero())
        return mpq_class(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.raw());
    mpq_class q(m);
    if (e >= 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return q;
}

inline Real real_from_rational(const mpq_class& q, Precision prec) {
    Real r(prec);
    mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

inline Real real_from_integer(const mpz_class& z, Precision prec) {
    Real r(prec);
    mpfr_set_z(r.raw(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

}  // namespace detail

/// Decay envelope (2/|alpha|)^n / (2n-1)!! for the bounded solution.
inline Real theorem2_bound(long n, const Real& alpha) {
    if (n < 0)
        throw std::invalid_argument("theorem2_bound requires n >= 0");
    if (alpha.is_zero())
        throw std::domain_error("theorem2_bound requires alpha != 0");
    const Precision p = std::max(alpha.precision(), kMinPrecision);
    const Real num = pow_ui(Real(2L, p) / abs(alpha), static_cast<unsigned long>(n));
    return num / detail::real_from_integer(detail::double_factorial(2 * n - 1), p);
}

/// Envelope coefficients b_{n,k} = (2/|alpha|)^k (n-k-1)!! / (n+k-1)!! for
/// 0 <= k <= n <= N, cross-checked in exact rational arithmetic against the
/// recurrence b_{n,k} = (b_{n+1,k-1} + b_{n-1,k-1}) / (|alpha| n) on the
/// enclosing triangle k <= n <= 2N - k.
struct BoundTable {
    Real alpha;
    std::vector<std::vector<Real>> entries;  // entries[n][k], k <= n <= N
    bool induction_exact;
};

/// Exact-rational core; entries are delivered as Real at prec bits.
inline BoundTable bound_table(const mpq_class& alpha, long N, Precision prec) {
    if (N < 1)
        throw std::invalid_argument("bound_table requires N >= 1");
    if (alpha == 0)
        throw std::domain_error("bound_table requires alpha != 0");
    const Precision p = checked_precision(prec);
    const mpq_class qa = abs(alpha);
    const mpq_class two_over_a = mpq_class(2) / qa;
    const long H = 2 * N;

    // closed form on the full check triangle
    std::vector<mpz_class> dfact(static_cast<std::size_t>(H + N) + 1);
    dfact[0] = 1;  // index shift: dfact[m + 1] = m!!
    for (long m = 0; m <= H + N - 1; ++m)
        dfact[static_cast<std::size_t>(m) + 1] =
            (m < 2) ? mpz_class(1) : mpz_class(dfact[static_cast<std::size_t>(m) - 1] * m);

    std::vector<std::vector<mpq_class>> closed(static_cast<std::size_t>(H) + 1);
    std::vector<mpq_class> pow_two_over_a(static_cast<std::size_t>(N) + 1);
    pow_two_over_a[0] = 1;
    for (long k = 1; k <= N; ++k)
        pow_two_over_a[static_cast<std::size_t>(k)] =
            pow_two_over_a[static_cast<std::size_t>(k) - 1] * two_over_a;
    for (long n = 0; n <= H; ++n) {
        const long kmax = std::min(n, std::min<long>(N, H - n));
        closed[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(kmax) + 1);
        for (long k = 0; k <= kmax; ++k)
            closed[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
                pow_two_over_a[static_cast<std::size_t>(k)] *
                dfact[static_cast<std::size_t>(n - k)] /
                mpq_class(dfact[static_cast<std::size_t>(n + k)]);
    }

    // recurrence fill over the same triangle; column 0 is identically 1
    bool exact = true;
    std::vector<std::vector<mpq_class>> rec(static_cast<std::size_t>(H) + 1);
    for (long n = 0; n <= H; ++n) {
        rec[static_cast<std::size_t>(n)].resize(closed[static_cast<std::size_t>(n)].size());
        rec[static_cast<std::size_t>(n)][0] = 1;
        exact = exact && (closed[static_cast<std::size_t>(n)][0] == 1);
    }
    for (long k = 1; k <= N; ++k) {
        for (long n = k; n <= H - k; ++n) {
            mpq_class v = (rec[static_cast<std::size_t>(n) + 1][static_cast<std::size_t>(k) - 1] +
                           rec[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k) - 1]) /
                          (qa * n);
            exact = exact &&
                    (v == closed[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
            rec[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = std::move(v);
        }
    }

    BoundTable table{detail::real_from_rational(alpha, p), {}, exact};
    table.entries.resize(static_cast<std::size_t>(N) + 1);
    for (long n = 0; n <= N; ++n) {
        table.entries[static_cast<std::size_t>(n)].reserve(static_cast<std::size_t>(n) + 1);
        for (long k = 0; k <= n; ++k)
            table.entries[static_cast<std::size_t>(n)].push_back(detail::real_from_rational(
                closed[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)], p));
    }
    return table;
}

inline BoundTable bound_table(const Real& alpha, long N) {
    if (alpha.is_zero())
        throw std::domain_error("bound_table requires alpha != 0");
    return bound_table(detail::rational_from_real(alpha), N,
                       std::max(alpha.precision(), kMinPrecision));
}

struct BoundRow {
    long n;       // 1-based: compares |a_{n-1}| against t^n / (2n-1)!!
    Real value;
    Real bound;
    Real margin;  // bound - value
};

struct BoundReport {
    std::vector<BoundRow> rows;
    bool all_ok;
    std::optional<long> first_violation;
};

/// Check |a_{n-1}| <= t^n / (2n-1)!! for every stored coefficient.
inline BoundReport check_bound(const VerblunskySequence& seq) {
    const Precision p = seq.t().precision();
    BoundReport report{{}, true, std::nullopt};
    report.rows.reserve(static_cast<std::size_t>(seq.size()));
    Real tn(1L, p);
    for (long n = 1; n <= seq.size(); ++n) {
        tn = tn * seq.t();
        const Real value = abs(seq[n - 1]);
        const Real bound =
            tn / detail::real_from_integer(detail::double_factorial(2 * n - 1), p);
        const Real margin = bound - value;
        if (!(margin >= 0L) && report.all_ok) {
            report.all_ok = false;
            report.first_violation = n;
        }
        report.rows.push_back(BoundRow{n, value, bound, margin});
    }
    return report;
}

/// theorem2_bound(n) * sqrt(2) * (|alpha| n / e)^n; tends to 1 from above as
/// n grows, independently of alpha.
inline Real stirling_ratio(long n, const Real& alpha) {
    if (n < 1)
        throw std::invalid_argument("stirling_ratio requires n >= 1");
    if (alpha.is_zero())
        throw std::domain_error("stirling_ratio requires alpha != 0");
    const Precision p = std::max(alpha.precision(), kMinPrecision);
    const Real base = abs(alpha) * n / euler(p);
    return theorem2_bound(n, alpha) * sqrt(Real(2L, p)) *
           pow_ui(base, static_cast<unsigned long>(n));
}

}  // namespace dpii
