#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpii/bessel.hpp"
#include "dpii/errors.hpp"
#include "dpii/real.hpp"

namespace dpii {

/// Parameters of the recurrence
///   a_{n+1} + a_{n-1} = -2(n+1) a_n / (t (1 - a_n^2)),   a_{-1} = -1,
/// equivalently alpha = -2/t in the normalized form.
struct PainleveParams {
    Real t;
    Real alpha;
    long max_index;       // orbit horizon N
    Precision precision;  // working precision in bits

    PainleveParams(const Real& t_in, long N, Precision prec)
        : t(t_in.round_to(checked_precision(prec))),
          alpha(Real(-2L, prec) / t_in.round_to(prec)),
          max_index(N),
          precision(prec) {
        if (!(t > 0L))
            throw std::domain_error("PainleveParams requires t > 0");
        if (N < 1)
            throw std::invalid_argument("PainleveParams requires max_index >= 1");
    }
};

/// a_0..a_{K} with every |a_n| < 1; the boundary value a_{-1} = -1 is a
/// constant of the recurrence, not a stored entry.
class VerblunskySequence {
  public:
    VerblunskySequence(Real t_in, std::vector<Real> entries)
        : t_(std::move(t_in)), a_(std::move(entries)) {
        if (!(t_ > 0L))
            throw std::domain_error("VerblunskySequence requires t > 0");
        if (a_.empty())
            throw std::invalid_argument("VerblunskySequence must hold at least a_0");
        for (const Real& a : a_)
            if (!(abs(a) < 1L))
                throw std::invalid_argument("coefficients must satisfy |a_n| < 1");
    }

    const Real& t() const { return t_; }
    long size() const { return static_cast<long>(a_.size()); }
    const Real& operator[](long n) const { return a_.at(static_cast<std::size_t>(n)); }
    const std::vector<Real>& entries() const { return a_; }

    static Real initial() { return Real(-1L, kMinPrecision); }  // a_{-1}

  private:
    Real t_;
    std::vector<Real> a_;
};

/// Outcome of iterating the recurrence from one trial a_0.
struct EscapeRecord {
    Real trial_a0;
    std::optional<long> exit_index;           // first n with |a_n| >= 1
    std::optional<int> exit_side;             // sign of a_n at exit
    std::optional<std::vector<Real>> orbit;   // a_0.. last computed entry

    bool escaped() const { return exit_index.has_value(); }
};

struct Bracket {
    Real lo;
    Real hi;
    Real width() const { return hi - lo; }
};

/// Run the recurrence forward from a_0 up to index max_index.  With
/// stop_on_exit the orbit ends at the first entry with |a_n| >= 1.
/// An exactly vanishing 1 - a_n^2 pivot raises SingularStep.
inline EscapeRecord dpii_forward(const Real& a0, const PainleveParams& params,
                                 bool stop_on_exit = true, bool record_orbit = true) {
    if (!(abs(a0) < 1L))
        throw std::invalid_argument("dpii_forward requires |a_0| < 1");
    const Precision p = params.precision;

    EscapeRecord rec{a0, std::nullopt, std::nullopt, std::nullopt};
    std::vector<Real> orbit;
    Real prev = VerblunskySequence::initial();
    Real cur = a0.round_to(p);
    if (record_orbit)
        orbit.push_back(cur);

    for (long n = 0; n < params.max_index; ++n) {
        const Real pivot = 1L - cur * cur;
        if (pivot.is_zero())
            throw SingularStep("recurrence pivot 1 - a_n^2 vanished", n);
        Real nxt = cur * (-2 * (n + 1)) / (params.t * pivot) - prev;
        if (record_orbit)
            orbit.push_back(nxt);
        if (!rec.exit_index && !(abs(nxt) < 1L)) {
            rec.exit_index = n + 1;
            rec.exit_side = nxt.sign() >= 0 ? 1 : -1;
            if (stop_on_exit)
                break;
        }
        prev = std::move(cur);
        cur = std::move(nxt);
    }
    if (record_orbit)
        rec.orbit = std::move(orbit);
    return rec;
}

/// max_n |(t/2)(1 - a_n^2)(a_{n+1} + a_{n-1}) + (n+1) a_n| over the stored
/// range, with a_{-1} = -1.
inline Real dpii_residual(const VerblunskySequence& seq) {
    if (seq.size() < 2)
        throw std::invalid_argument("dpii_residual needs at least a_0 and a_1");
    const Real half_t = seq.t() / 2L;
    Real prev = VerblunskySequence::initial();
    Real worst(kMinPrecision);
    for (long n = 0; n + 1 < seq.size(); ++n) {
        const Real& cur = seq[n];
        Real r = abs(half_t * (1L - cur * cur) * (seq[n + 1] + prev) + cur * (n + 1));
        worst = max(worst, r);
        prev = cur;
    }
    return worst;
}

namespace detail {

inline std::optional<std::vector<Real>> bounded_orbit_at(const PainleveParams& params,
                                                         Precision pw) {
    PainleveParams wide(params.t.round_to(pw), params.max_index, pw);
    Real a0 = bessel_ratio_cf(0, wide.t, pw);
    EscapeRecord rec = dpii_forward(a0, wide, /*stop_on_exit=*/true, /*record_orbit=*/true);
    if (rec.escaped())
        return std::nullopt;
    return std::move(rec.orbit);
}

}  // namespace detail

/// The unique bounded solution, computed by seeding the recurrence with
/// a_0 = I_1(t)/I_0(t) (continued fraction) at an elevated working
/// precision.  The forward iteration is unstable (the bounded orbit
/// repels), so the elevation covers the accumulated amplification
///   2 * sum_{k<=N} max(0, log2(2k/t))
/// and the result is certified by agreement between runs at pw and 2*pw;
/// on disagreement the working precision doubles.
inline VerblunskySequence bessel_solution(const PainleveParams& params) {
    const Precision p = params.precision;
    const long N = params.max_index;

    double budget = 0.0;
    const double td = params.t.to_double();
    for (long k = 1; k <= N; ++k)
        budget += std::max(0.0, std::log2(2.0 * static_cast<double>(k) / td));
    Precision pw = p + static_cast<Precision>(std::ceil(2.0 * budget)) + 64;

    const Real tol = Real::pow2(-(p + 8), p + 16);
    const Precision ceiling = 1L << 22;
    std::optional<std::vector<Real>> lo_run;
    for (; pw <= ceiling; pw *= 2) {
        if (!lo_run)
            lo_run = detail::bounded_orbit_at(params, pw);
        if (!lo_run)
            continue;
        std::optional<std::vector<Real>> hi_run = detail::bounded_orbit_at(params, 2 * pw);
        if (!hi_run) {
            lo_run.reset();
            continue;
        }
        bool certified = true;
        for (std::size_t n = 0; n < hi_run->size(); ++n) {
            if (!(abs((*lo_run)[n] - (*hi_run)[n]) <= tol * abs((*hi_run)[n]))) {
                certified = false;
                break;
            }
        }
        if (certified) {
            std::vector<Real> out;
            out.reserve(hi_run->size());
            for (const Real& a : *hi_run)
                out.push_back(a.round_to(p));
            return VerblunskySequence(params.t, std::move(out));
        }
        lo_run = std::move(hi_run);
    }
    throw PrecisionExhausted("bounded-solution certification failed below the precision ceiling");
}

/// One bisection step of the shooting method.
struct ShootStep {
    long iteration;
    Real lo;
    Real hi;
    Real width;
    EscapeRecord midpoint;
};

struct ShootResult {
    Bracket bracket;
    std::vector<ShootStep> trace;
    long scan_points;
};

namespace detail {

// Orbits leaving through alternating sides collapse to a single orientation:
// the linearization of the recurrence around the bounded orbit has a strictly
// negative multiplier at every step, so sign(a_0 - a_0^*) equals
// exit_side * (-1)^{exit_index}.
inline int escape_signature(const EscapeRecord& rec) {
    return *rec.exit_side * ((*rec.exit_index % 2 == 0) ? 1 : -1);
}

}  // namespace detail

/// Locate the bounded solution's a_0 by scanning (-1, 1) for the longest
/// surviving orbit, then bisecting on the calibrated escape signature until
/// the bracket is narrower than target_width.
inline ShootResult shoot(const PainleveParams& params, const Real& target_width,
                         long scan_points = 129) {
    if (!(target_width > 0L))
        throw std::invalid_argument("shoot requires target_width > 0");
    if (scan_points < 5)
        throw std::invalid_argument("shoot requires at least 5 scan points");
    const Precision p = params.precision;

    // Scan a grid strictly inside (-1, 1) and rank trial points by survival
    // depth; surviving orbits rank above every escaping one.
    const Real margin = Real::pow2(-16, p);
    const Real lo_end = margin - 1L;
    const Real step = (Real(2L, p) - 2L * margin) / (scan_points - 1);
    std::vector<EscapeRecord> scan;
    scan.reserve(static_cast<std::size_t>(scan_points));
    for (long i = 0; i < scan_points; ++i) {
        Real a0 = lo_end + step * i;
        scan.push_back(dpii_forward(a0, params, true, false));
    }

    long best_lo = -1, best_hi = -1;
    bool best_survives = false;
    long best_exit = -1;
    for (long i = 0; i < scan_points; ++i) {
        const bool survives = !scan[static_cast<std::size_t>(i)].escaped();
        const long ex = survives ? -1 : *scan[static_cast<std::size_t>(i)].exit_index;
        const bool better = best_lo < 0 || (survives && !best_survives) ||
                            (!best_survives && ex > best_exit);
        const bool ties = !better && survives == best_survives &&
                          (survives || ex == best_exit);
        if (better) {
            best_lo = best_hi = i;
            best_survives = survives;
            best_exit = ex;
        } else if (ties) {
            best_hi = i;
        }
    }
    if (best_lo <= 0 || best_hi >= scan_points - 1)
        throw CalibrationFailure("survival peak sits at the scan boundary");

    const EscapeRecord& left = scan[static_cast<std::size_t>(best_lo - 1)];
    const EscapeRecord& right = scan[static_cast<std::size_t>(best_hi + 1)];
    const int sig_left = detail::escape_signature(left);
    const int sig_right = detail::escape_signature(right);
    if (sig_left == sig_right)
        throw CalibrationFailure("escape signatures match on both flanks of the peak");
    for (long i = 0; i < best_lo; ++i)
        if (detail::escape_signature(scan[static_cast<std::size_t>(i)]) != sig_left)
            throw CalibrationFailure("left flank escape signatures are inconsistent");
    for (long i = best_hi + 1; i < scan_points; ++i)
        if (detail::escape_signature(scan[static_cast<std::size_t>(i)]) != sig_right)
            throw CalibrationFailure("right flank escape signatures are inconsistent");

    Real lo = left.trial_a0;
    Real hi = right.trial_a0;
    std::vector<ShootStep> trace;
    long iter = 0;
    while (hi - lo > target_width) {
        Real mid = (lo + hi) / 2L;
        if (mid == lo || mid == hi)
            throw PrecisionExhausted("bracket width reached the working-precision floor");
        EscapeRecord rec = dpii_forward(mid, params, true, false);
        if (!rec.escaped())
            throw PrecisionExhausted(
                "midpoint orbit survived the horizon; raise max_index or precision");
        if (detail::escape_signature(rec) == sig_left)
            lo = mid;
        else
            hi = mid;
        trace.push_back(ShootStep{++iter, lo, hi, hi - lo, std::move(rec)});
    }
    return ShootResult{Bracket{lo, hi}, std::move(trace), scan_points};
}

struct GridSpec {
    Real from;
    Real to;
    long steps;
};

/// Escape index and side for every a_0 on a uniform grid in (-1, 1).
inline std::vector<EscapeRecord> escape_map(const PainleveParams& params,
                                            const GridSpec& grid) {
    if (grid.steps < 1)
        throw std::invalid_argument("escape_map requires at least one grid point");
    if (!(abs(grid.from) < 1L) || !(abs(grid.to) < 1L) || grid.to < grid.from)
        throw std::invalid_argument("escape_map grid must satisfy -1 < from <= to < 1");
    const Precision p = params.precision;
    const Real from = grid.from.round_to(p);
    const Real span = grid.to.round_to(p) - from;

    std::vector<EscapeRecord> out;
    out.reserve(static_cast<std::size_t>(grid.steps));
    for (long i = 0; i < grid.steps; ++i) {
        Real a0 = grid.steps == 1 ? from : from + span * i / (grid.steps - 1);
        out.push_back(dpii_forward(a0, params, true, false));
    }
    return out;
}

}  // namespace dpii
