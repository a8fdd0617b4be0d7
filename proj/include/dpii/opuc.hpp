#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "dpii/bessel.hpp"
#include "dpii/errors.hpp"
#include "dpii/painleve.hpp"
#include "dpii/real.hpp"

namespace dpii {

/// Monic polynomial with real coefficients, stored ascending; the leading
/// coefficient is exactly 1.
class MonicPolynomial {
  public:
    explicit MonicPolynomial(Precision prec = kMinPrecision) : c_{Real(1L, prec)} {}
    explicit MonicPolynomial(std::vector<Real> ascending) : c_(std::move(ascending)) {
        if (c_.empty() || c_.back() != 1L)
            throw std::invalid_argument("leading coefficient must be exactly 1");
    }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const Real& operator[](long j) const { return c_.at(static_cast<std::size_t>(j)); }
    const std::vector<Real>& coeffs() const { return c_; }

  private:
    std::vector<Real> c_;
};

/// Coefficient reversal; for a monic input the constant term of the result
/// is exactly 1.  (With real coefficients this is the usual *-transform on
/// the unit circle.)
inline std::vector<Real> reversed(const MonicPolynomial& phi) {
    std::vector<Real> r(phi.coeffs().rbegin(), phi.coeffs().rend());
    return r;
}

/// One step of the recursion  Phi_{n+1}(z) = z Phi_n(z) - a rev(Phi_n)(z).
inline MonicPolynomial szego_step(const MonicPolynomial& phi, const Real& a) {
    if (!(abs(a) < 1L))
        throw std::invalid_argument("szego_step requires |a| < 1");
    const long n = phi.degree();
    std::vector<Real> c(static_cast<std::size_t>(n) + 2, Real(kMinPrecision));
    for (long j = 0; j <= n; ++j)
        c[static_cast<std::size_t>(j) + 1] = phi[j];
    for (long j = 0; j <= n; ++j)
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] - a * phi[n - j];
    return MonicPolynomial(std::move(c));
}

/// kappa_0^2..kappa_K^2 with kappa_0^2 = 1 and
/// kappa_{n+1}^2 = kappa_n^2 / (1 - a_n^2); positive and non-decreasing.
struct KappaSequence {
    std::vector<Real> kappa_sq;

    explicit KappaSequence(std::vector<Real> ks) : kappa_sq(std::move(ks)) {
        if (kappa_sq.empty() || kappa_sq[0] != 1L)
            throw std::invalid_argument("kappa_0^2 must be exactly 1");
        for (std::size_t n = 1; n < kappa_sq.size(); ++n)
            if (!(kappa_sq[n] >= kappa_sq[n - 1]))
                throw std::invalid_argument("kappa^2 must be positive and non-decreasing");
    }
    long max_index() const { return static_cast<long>(kappa_sq.size()) - 1; }
};

inline KappaSequence kappa_from_verblunsky(const VerblunskySequence& seq) {
    std::vector<Real> ks;
    ks.reserve(static_cast<std::size_t>(seq.size()) + 1);
    ks.push_back(Real(1L, seq.t().precision()));
    for (long n = 0; n < seq.size(); ++n)
        ks.push_back(ks.back() / (1L - seq[n] * seq[n]));
    return KappaSequence(std::move(ks));
}

/// max_n |kappa_n^2 / kappa_{n+1}^2 - (1 - a_n^2)| for a built ladder.
inline Real kappa_ladder_deviation(const VerblunskySequence& seq) {
    KappaSequence ks = kappa_from_verblunsky(seq);
    Real worst(kMinPrecision);
    for (long n = 0; n < seq.size(); ++n) {
        const std::size_t i = static_cast<std::size_t>(n);
        worst = max(worst, abs(ks.kappa_sq[i] / ks.kappa_sq[i + 1] - (1L - seq[n] * seq[n])));
    }
    return worst;
}

/// B_n = (t/2)(1 - a_{n-2}^2)(1 - a_{n-1}^2) for n = 2..size; values[i]
/// holds B_{i+2}.
struct BSequence {
    Real t;
    std::vector<Real> values;

    long first_index() const { return 2; }
    const Real& at_index(long n) const { return values.at(static_cast<std::size_t>(n - 2)); }
};

inline BSequence b_sequence(const VerblunskySequence& seq) {
    if (seq.size() < 2)
        throw std::invalid_argument("b_sequence needs a_0 and a_1");
    const Real half_t = seq.t() / 2L;
    BSequence b{seq.t(), {}};
    b.values.reserve(static_cast<std::size_t>(seq.size()) - 1);
    for (long n = 2; n <= seq.size(); ++n)
        b.values.push_back(half_t * (1L - seq[n - 2] * seq[n - 2]) *
                           (1L - seq[n - 1] * seq[n - 1]));
    return b;
}

/// max_n |B_n - (t/2) kappa_{n-2}^2 / kappa_n^2|: the two closed forms of
/// the same quantity must agree.
inline Real b_kappa_deviation(const VerblunskySequence& seq) {
    BSequence b = b_sequence(seq);
    KappaSequence ks = kappa_from_verblunsky(seq);
    const Real half_t = seq.t() / 2L;
    Real worst(kMinPrecision);
    for (long n = 2; n <= seq.size(); ++n) {
        const Real other = half_t * ks.kappa_sq[static_cast<std::size_t>(n) - 2] /
                           ks.kappa_sq[static_cast<std::size_t>(n)];
        worst = max(worst, abs(b.at_index(n) - other));
    }
    return worst;
}

/// Reflection coefficients from trigonometric moments:
///   a_n = kappa_n^2 * sum_j Phi_n[j] mu_{j+1},
/// then advance Phi by the recursion.  mu_0..mu_M yields a_0..a_{M-1}.
/// A computed coefficient outside (-1, 1) means the moment data is not a
/// positive-definite sequence (or precision is insufficient) and raises
/// PositivityFailure at the offending index.
inline VerblunskySequence levinson_verblunsky(const MomentSequence& moments) {
    const long M = moments.max_index();
    if (M < 1)
        throw std::invalid_argument("levinson_verblunsky needs mu_0 and mu_1 at least");
    const Precision p = moments.t.precision();

    MonicPolynomial phi(p);
    Real kappa2(1L, p);
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(M));
    for (long n = 0; n < M; ++n) {
        Real inner(p);
        for (long j = 0; j <= n; ++j)
            inner = inner + phi[j] * moments.mu[static_cast<std::size_t>(j) + 1];
        Real a = kappa2 * inner;
        if (!(abs(a) < 1L))
            throw PositivityFailure("reflection coefficient left (-1, 1)", n);
        kappa2 = kappa2 / (1L - a * a);
        phi = szego_step(phi, a);
        out.push_back(std::move(a));
    }
    return VerblunskySequence(moments.t, std::move(out));
}

/// Normalized weight  e^{t cos theta} / (2 pi I_0(t))  on the unit circle.
struct MeasureSpec {
    Real t;
    Precision precision;

    MeasureSpec(const Real& t_in, Precision prec)
        : t(t_in.round_to(checked_precision(prec))), precision(prec),
          norm_(2L * pi(prec + 8) * bessel_i_series(0, t_in, prec + 8)) {
        if (!(t > 0L))
            throw std::domain_error("MeasureSpec requires t > 0");
    }

    Real density(const Real& theta) const {
        return (exp(t * cos(theta)) / norm_).round_to(precision);
    }

  private:
    Real norm_;
};

/// Trigonometric moments of the measure by the trapezoid rule on the
/// periodic integrand: raw sums s_n = sum_j cos(n theta_j) w(theta_j) over
/// uniform nodes, normalized as mu_n = s_n / s_0 (so the weight's own
/// normalization never enters).  Nodes double until successive moment
/// vectors agree within tol.
inline MomentSequence moments_by_quadrature(const MeasureSpec& measure, long N,
                                            const Real& tol, long initial_nodes = 64,
                                            long node_cap = (1L << 21)) {
    if (N < 0)
        throw std::invalid_argument("moments_by_quadrature requires N >= 0");
    if (!(tol > 0L))
        throw std::invalid_argument("moments_by_quadrature requires tol > 0");
    const Precision p = measure.precision;
    const Precision pw = p + 32;
    const Real t = measure.t.round_to(pw);
    const Real two_pi = 2L * pi(pw);

    std::vector<Real> prev;
    for (long M = std::max(initial_nodes, 16L);; M *= 2) {
        if (M > node_cap)
            throw ConvergenceFailure("quadrature nodes exceeded the cap before the "
                                     "moments stabilized");
        std::vector<Real> s(static_cast<std::size_t>(N) + 1, Real(pw));
        for (long j = 0; j < M; ++j) {
            const auto [sin_t, cos_t] = sin_cos(two_pi * j / M);
            const Real w = exp(t * cos_t);
            Real re(1L, pw), im(pw);
            for (long n = 0; n <= N; ++n) {
                s[static_cast<std::size_t>(n)] = s[static_cast<std::size_t>(n)] + w * re;
                Real re_next = re * cos_t - im * sin_t;
                im = re * sin_t + im * cos_t;
                re = std::move(re_next);
            }
        }
        std::vector<Real> mu;
        mu.reserve(static_cast<std::size_t>(N) + 1);
        mu.push_back(Real(1L, p));
        for (long n = 1; n <= N; ++n)
            mu.push_back((s[static_cast<std::size_t>(n)] / s[0]).round_to(p));
        if (!prev.empty()) {
            bool settled = true;
            for (std::size_t n = 1; n < mu.size() && settled; ++n)
                settled = abs(mu[n] - prev[n]) <= tol;
            if (settled) {
                for (long n = 1; n <= N; ++n)
                    if (!(mu[static_cast<std::size_t>(n)] > 0L) ||
                        !(mu[static_cast<std::size_t>(n)] <
                          mu[static_cast<std::size_t>(n) - 1]))
                        throw PrecisionExhausted("quadrature moment tail fell below "
                                                 "working precision");
                return MomentSequence(measure.t.round_to(p), std::move(mu));
            }
        }
        prev = std::move(mu);
    }
}

/// max |(n-1) mu_{n-1} + (t/2)(mu_n - mu_{n-2})| over 2 <= n <= N.
inline Real verify_moment_recurrence(const MomentSequence& moments) {
    if (moments.max_index() < 2)
        throw std::invalid_argument("moment recurrence needs mu_0..mu_2 at least");
    const Real half_t = moments.t / 2L;
    Real worst(kMinPrecision);
    for (long n = 2; n <= moments.max_index(); ++n) {
        const std::size_t i = static_cast<std::size_t>(n);
        worst = max(worst, abs(moments.mu[i - 1] * (n - 1) +
                               half_t * (moments.mu[i] - moments.mu[i - 2])));
    }
    return worst;
}

namespace detail {

inline std::vector<MonicPolynomial> phi_family(const VerblunskySequence& seq) {
    std::vector<MonicPolynomial> phis;
    phis.reserve(static_cast<std::size_t>(seq.size()) + 1);
    phis.emplace_back(seq.t().precision());
    for (long n = 0; n < seq.size(); ++n)
        phis.push_back(szego_step(phis.back(), seq[n]));
    return phis;
}

}  // namespace detail

/// max abs coefficient deviation of  Phi_n' - n Phi_{n-1} - B_n Phi_{n-2}
/// over 2 <= n <= size.  Zero (to precision) exactly on solutions of the
/// recurrence; generic coefficient sequences violate it.
inline Real verify_lemma1(const VerblunskySequence& seq) {
    if (seq.size() < 2)
        throw std::invalid_argument("verify_lemma1 needs at least a_0 and a_1");
    const std::vector<MonicPolynomial> phis = detail::phi_family(seq);
    const BSequence b = b_sequence(seq);
    Real worst(kMinPrecision);
    for (long n = 2; n <= seq.size(); ++n) {
        const MonicPolynomial& cur = phis[static_cast<std::size_t>(n)];
        const MonicPolynomial& one_down = phis[static_cast<std::size_t>(n) - 1];
        const MonicPolynomial& two_down = phis[static_cast<std::size_t>(n) - 2];
        for (long j = 0; j <= n - 1; ++j) {
            Real r = cur[j + 1] * (j + 1) - one_down[j] * n;
            if (j <= n - 2)
                r = r - b.at_index(n) * two_down[j];
            worst = max(worst, abs(r));
        }
    }
    return worst;
}

/// max abs coefficient deviation of
///   rev(Phi_n) + sum_{k=0}^{n} (kappa_k^2 / kappa_n^2) a_{k-1} Phi_k
/// over 0 <= n <= size, with a_{-1} = -1.  An algebraic identity: holds for
/// every coefficient sequence in (-1, 1)^N, not only for solutions.
inline Real verify_phi_star_expansion(const VerblunskySequence& seq) {
    const std::vector<MonicPolynomial> phis = detail::phi_family(seq);
    const KappaSequence ks = kappa_from_verblunsky(seq);
    Real worst(kMinPrecision);
    for (long n = 0; n <= seq.size(); ++n) {
        const std::vector<Real> rev = reversed(phis[static_cast<std::size_t>(n)]);
        std::vector<Real> acc(static_cast<std::size_t>(n) + 1, Real(kMinPrecision));
        for (long k = 0; k <= n; ++k) {
            const Real w = (ks.kappa_sq[static_cast<std::size_t>(k)] /
                            ks.kappa_sq[static_cast<std::size_t>(n)]) *
                           (k == 0 ? VerblunskySequence::initial() : seq[k - 1]);
            const MonicPolynomial& pk = phis[static_cast<std::size_t>(k)];
            for (long j = 0; j <= k; ++j)
                acc[static_cast<std::size_t>(j)] = acc[static_cast<std::size_t>(j)] + w * pk[j];
        }
        for (long j = 0; j <= n; ++j)
            worst = max(worst, abs(rev[static_cast<std::size_t>(j)] +
                                   acc[static_cast<std::size_t>(j)]));
    }
    return worst;
}

struct GramReport {
    std::vector<std::vector<Real>> deviation;  // G[n][m] - delta_nm / kappa_n^2
    Real max_abs;
    long nodes;
};

/// Gram matrix of Phi_0..Phi_N against the measure by unit-circle
/// quadrature; expected value is diag(1/kappa_n^2).  Polynomial values are
/// advanced per node by the recursion, using rev(Phi_n)(z) = z^n conj(Phi_n(z))
/// on |z| = 1.  Nodes double until the deviation matrix stabilizes.
inline GramReport gram_check(const VerblunskySequence& seq, const MeasureSpec& measure,
                             long N, long initial_nodes = 64,
                             long node_cap = (1L << 19)) {
    if (N < 0 || N > seq.size())
        throw std::invalid_argument("gram_check requires 0 <= N <= size of the sequence");
    const Precision p = measure.precision;
    const Precision pw = p + 32;
    const Real t = measure.t.round_to(pw);
    const Real two_pi = 2L * pi(pw);
    const Real settle = Real::pow2(-(p + 8), pw);
    const KappaSequence ks = kappa_from_verblunsky(seq);
    const std::size_t dim = static_cast<std::size_t>(N) + 1;

    std::vector<std::vector<Real>> prev;
    for (long M = std::max({initial_nodes, 2 * (N + 1), 16L});; M *= 2) {
        if (M > node_cap)
            throw ConvergenceFailure("quadrature nodes exceeded the cap before the "
                                     "Gram matrix stabilized");
        std::vector<std::vector<Real>> acc(dim, std::vector<Real>(dim, Real(pw)));
        Real total_weight(pw);
        std::vector<Real> re(dim, Real(pw)), im(dim, Real(pw));
        for (long j = 0; j < M; ++j) {
            const auto [sin_t, cos_t] = sin_cos(two_pi * j / M);
            const Real w = exp(t * cos_t);
            total_weight = total_weight + w;
            re[0] = Real(1L, pw);
            im[0] = Real(0L, pw);
            Real zp_re(1L, pw), zp_im(pw);  // z^n
            for (long n = 0; n < N; ++n) {
                const std::size_t i = static_cast<std::size_t>(n);
                // rev(Phi_n)(z) = z^n conj(Phi_n(z))
                const Real star_re = zp_re * re[i] + zp_im * im[i];
                const Real star_im = zp_im * re[i] - zp_re * im[i];
                re[i + 1] = cos_t * re[i] - sin_t * im[i] - seq[n] * star_re;
                im[i + 1] = cos_t * im[i] + sin_t * re[i] - seq[n] * star_im;
                Real zp_next = zp_re * cos_t - zp_im * sin_t;
                zp_im = zp_re * sin_t + zp_im * cos_t;
                zp_re = std::move(zp_next);
            }
            for (std::size_t n = 0; n < dim; ++n)
                for (std::size_t m = 0; m <= n; ++m)
                    acc[n][m] = acc[n][m] + w * (re[n] * re[m] + im[n] * im[m]);
        }

        std::vector<std::vector<Real>> dev(dim, std::vector<Real>(dim, Real(p)));
        Real max_abs(kMinPrecision);
        for (std::size_t n = 0; n < dim; ++n) {
            for (std::size_t m = 0; m <= n; ++m) {
                Real g = acc[n][m] / total_weight;
                if (m == n)
                    g = g - 1L / ks.kappa_sq[n];
                dev[n][m] = g.round_to(p);
                dev[m][n] = dev[n][m];
                max_abs = max(max_abs, abs(dev[n][m]));
            }
        }
        if (!prev.empty()) {
            bool settled = true;
            for (std::size_t n = 0; n < dim && settled; ++n)
                for (std::size_t m = 0; m <= n && settled; ++m)
                    settled = abs(dev[n][m] - prev[n][m]) <= settle;
            if (settled)
                return GramReport{std::move(dev), max_abs, M};
        }
        prev = std::move(dev);
    }
}

}  // namespace dpii
