// Acceptance gate: runs every advertised guarantee end to end and prints one
// PASS/FAIL line per criterion.  Exits nonzero if any criterion fails.
//
// Usage: acceptance [path-to-cli-binary]
// The CLI path is needed only for the byte-determinism criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "dpii/bessel.hpp"
#include "dpii/bounds.hpp"
#include "dpii/opuc.hpp"
#include "dpii/painleve.hpp"

using namespace dpii;

namespace {

int g_failed = 0;

void line(int idx, bool ok, const std::string& text) {
    std::printf("%s %2d. %s\n", ok ? "PASS" : "FAIL", idx, text.c_str());
    if (!ok)
        ++g_failed;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<Real> random_admissible(std::uint64_t seed, long len, Precision prec) {
    std::uint64_t s = seed;
    std::vector<Real> v;
    v.reserve(static_cast<std::size_t>(len));
    for (long i = 0; i < len; ++i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        const double u = static_cast<double>(s >> 11) / 9007199254740992.0;
        v.emplace_back(u * 1.8 - 0.9, prec);
    }
    return v;
}

struct Capture {
    int status = -1;
    std::string out;
};

Capture run_command(const std::string& cmd) {
    Capture cap;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe)
        return cap;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        cap.out.append(buf, got);
    const int rc = pclose(pipe);
    cap.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return cap;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    // 1. Continued fraction and series quotient agree on I_1/I_0.
    try {
        const auto start = std::chrono::steady_clock::now();
        Real worst(64);
        for (long ti : {1L, 2L, 5L}) {
            const Real t(ti, 256);
            const Real cf = bessel_ratio_cf(0, t, 256);
            const Real quot = bessel_i_series(1, t, 256) / bessel_i_series(0, t, 256);
            worst = max(worst, abs(cf - quot) / abs(quot));
        }
        const double dt = elapsed_s(start);
        line(1, worst < Real("1e-60", 64) && dt < 1.0,
             "continued fraction vs series quotient, t in {1,2,5}: max rel err " +
                 num(worst.to_double()) + " (< 1e-60), " + num(dt) + " s (< 1)");
    } catch (const std::exception& e) {
        line(1, false, std::string("bessel consistency raised: ") + e.what());
    }

    // 2. Shooting brackets the Bessel-ratio seed at t = 2 and t = 1.
    try {
        bool ok = true;
        std::string detail;
        for (long ti : {2L, 1L}) {
            const auto start = std::chrono::steady_clock::now();
            const Real t(ti, 1024);
            PainleveParams params(t, 40, 1024);
            ShootResult res = shoot(params, Real("1e-25", 1024));
            const Real seed = bessel_ratio_cf(0, t, 1024);
            const double dt = elapsed_s(start);
            const bool contains = res.bracket.lo <= seed && seed <= res.bracket.hi;
            const bool narrow = res.bracket.width() <= Real("1e-25", 64);
            ok = ok && contains && narrow && dt < 60.0;
            detail += " t=" + std::to_string(ti) + (contains ? " contains" : " MISSES") +
                      " seed, width " + num(res.bracket.width().to_double()) + ", " +
                      num(dt) + " s (< 60);";
        }
        line(2, ok, "shooting bracket holds the initial value:" + detail);
    } catch (const std::exception& e) {
        line(2, false, std::string("shooting raised: ") + e.what());
    }

    // 3. Moment reconstruction equals the Bessel-seeded solution.
    try {
        const auto start = std::chrono::steady_clock::now();
        const Real t(2L, 512);
        VerblunskySequence lev = levinson_verblunsky(moments_from_bessel(t, 31, 512));
        VerblunskySequence sol = bessel_solution(PainleveParams(t, 30, 512));
        Real worst(64);
        for (long n = 0; n <= 30; ++n)
            worst = max(worst, abs(lev[n] - sol[n]));
        const double dt = elapsed_s(start);
        line(3, worst < Real("1e-20", 64) && dt < 10.0,
             "Levinson vs Bessel solution, t=2, n<=30: max abs diff " +
                 num(worst.to_double()) + " (< 1e-20), " + num(dt) + " s (< 10)");
    } catch (const std::exception& e) {
        line(3, false, std::string("cross-method equivalence raised: ") + e.what());
    }

    // 4. Derivative identity: tight on the solution, broken by a bump.
    try {
        const Real t(2L, 512);
        VerblunskySequence sol = bessel_solution(PainleveParams(t, 40, 512));
        const Real on_solution = verify_lemma1(sol);

        std::vector<Real> bump = sol.entries();
        bump[1] = bump[1] + Real("1e-2", 512);
        const Real on_bumped = verify_lemma1(VerblunskySequence(sol.t(), std::move(bump)));

        line(4,
             on_solution < Real("1e-60", 64) && on_bumped > Real("1e-4", 64),
             "derivative identity: solution residual " + num(on_solution.to_double()) +
                 " (< 1e-60), perturbed residual " + num(on_bumped.to_double()) +
                 " (> 1e-4)");
    } catch (const std::exception& e) {
        line(4, false, std::string("derivative identity raised: ") + e.what());
    }

    // 5. Reversal expansion holds on the solution and on 100 random sequences.
    try {
        const Real t(2L, 512);
        VerblunskySequence sol = bessel_solution(PainleveParams(t, 40, 512));
        Real worst = verify_phi_star_expansion(sol);
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            VerblunskySequence rnd(Real(2L, 384), random_admissible(seed, 16, 384));
            worst = max(worst, verify_phi_star_expansion(rnd));
        }
        line(5, worst < Real("1e-60", 64),
             "reversal expansion on solution + 100 random sequences: max residual " +
                 num(worst.to_double()) + " (< 1e-60)");
    } catch (const std::exception& e) {
        line(5, false, std::string("reversal expansion raised: ") + e.what());
    }

    // 6. Three-term moment recurrence.
    try {
        const Real t(2L, 512);
        const Real res = verify_moment_recurrence(moments_from_bessel(t, 60, 512));
        line(6, res < Real("1e-60", 64),
             "moment recurrence, t=2, n<=60: residual " + num(res.to_double()) +
                 " (< 1e-60)");
    } catch (const std::exception& e) {
        line(6, false, std::string("moment recurrence raised: ") + e.what());
    }

    // 7. Quadrature moments match, and the Gram matrix is diagonal.
    try {
        const Real t(2L, 512);
        MeasureSpec measure(t, 512);
        MomentSequence quad = moments_by_quadrature(measure, 30, Real("1e-35", 64));
        MomentSequence direct = moments_from_bessel(t, 30, 512);
        Real worst(64);
        for (long n = 0; n <= 30; ++n)
            worst = max(worst, abs(quad.mu[static_cast<std::size_t>(n)] -
                                   direct.mu[static_cast<std::size_t>(n)]));
        VerblunskySequence sol = bessel_solution(PainleveParams(t, 10, 512));
        GramReport gram = gram_check(sol, measure, 10);
        line(7,
             worst < Real("1e-30", 64) && gram.max_abs < Real("1e-25", 64),
             "quadrature vs Bessel moments: max diff " + num(worst.to_double()) +
                 " (< 1e-30); Gram deviation " + num(gram.max_abs.to_double()) +
                 " (< 1e-25, " + std::to_string(gram.nodes) + " nodes)");
    } catch (const std::exception& e) {
        line(7, false, std::string("quadrature oracle raised: ") + e.what());
    }

    // 8. Decay envelope holds, and the bound-table induction is exact.
    try {
        bool envelope = true;
        for (long ti : {1L, 2L, 5L}) {
            const Real t(ti, 512);
            VerblunskySequence sol = bessel_solution(PainleveParams(t, 40, 512));
            envelope = envelope && check_bound(sol).all_ok;
        }
        bool exact = true;
        for (const mpq_class& alpha :
             {mpq_class(-2), mpq_class(-1), mpq_class(2, 5)}) {
            exact = exact && bound_table(alpha, 30, 256).induction_exact;
        }
        line(8, envelope && exact,
             std::string("decay envelope t in {1,2,5}, n <= 41: ") +
                 (envelope ? "holds" : "VIOLATED") +
                 "; table recurrence vs closed form for alpha in {-2,-1,2/5}: " +
                 (exact ? "exact" : "MISMATCH"));
    } catch (const std::exception& e) {
        line(8, false, std::string("decay envelope raised: ") + e.what());
    }

    // 9. Scaled envelope tends to 1 monotonically.
    try {
        const Real alpha(-1L, 256);
        Real prev(64);
        bool monotone = true;
        for (long n : {25L, 50L, 100L, 200L}) {
            const Real r = stirling_ratio(n, alpha);
            if (n > 25 && !(r < prev))
                monotone = false;
            prev = r;
        }
        const Real off = abs(prev - 1L);
        line(9, monotone && off <= Real("0.01", 64),
             "scaled envelope ratio: |r(200) - 1| = " + num(off.to_double()) +
                 " (<= 0.01), monotone over {25,50,100,200}: " +
                 (monotone ? "yes" : "NO"));
    } catch (const std::exception& e) {
        line(9, false, std::string("scaled envelope raised: ") + e.what());
    }

    // 10. Escape map peaks at the seed; 1e-10 perturbations die by index 30.
    try {
        const auto start = std::chrono::steady_clock::now();
        const Precision p = 256;
        const Real t(2L, p);
        PainleveParams params(t, 30, p);
        std::vector<EscapeRecord> map =
            escape_map(params, GridSpec{Real("0.6", p), Real("0.8", p), 2001});

        const Real seed = bessel_ratio_cf(0, t, p);
        long deepest = -1;
        for (const EscapeRecord& r : map) {
            const long depth = r.escaped() ? *r.exit_index : 32;  // survivors rank deepest
            deepest = std::max(deepest, depth);
        }
        double nearest = 1.0;
        for (const EscapeRecord& r : map) {
            const long depth = r.escaped() ? *r.exit_index : 32;
            if (depth == deepest)
                nearest = std::min(nearest,
                                   std::fabs((r.trial_a0 - seed).to_double()));
        }
        const bool peak_at_seed = nearest <= 5.01e-5;  // half a grid cell

        EscapeRecord up = dpii_forward(seed + Real("1e-10", p), params, true, false);
        EscapeRecord down = dpii_forward(seed - Real("1e-10", p), params, true, false);
        const bool perturbations_escape = up.escaped() && *up.exit_index <= 30 &&
                                          down.escaped() && *down.exit_index <= 30;
        const double dt = elapsed_s(start);
        line(10, peak_at_seed && perturbations_escape && dt < 30.0,
             "escape map [0.6,0.8] x 2001: deepest cell " + num(nearest) +
                 " from the seed (<= 5.01e-5); +/-1e-10 exit by {" +
                 (up.escaped() ? std::to_string(*up.exit_index) : std::string("-")) + "," +
                 (down.escaped() ? std::to_string(*down.exit_index) : std::string("-")) +
                 "} (<= 30); " + num(dt) + " s (< 30)");
    } catch (const std::exception& e) {
        line(10, false, std::string("escape map raised: ") + e.what());
    }

    // 11. Byte-identical reruns of the command-line front end.
    if (cli.empty()) {
        line(11, false, "determinism: no CLI path given on the command line");
    } else {
        bool ok = true;
        std::string detail;
        for (const std::string& args :
             {std::string("solve --t 2 --n 12 --precision 320 --format json"),
              std::string("verify --t 1 --n 8 --precision 192 --format csv")}) {
            Capture a = run_command(cli + " " + args);
            Capture b = run_command(cli + " " + args);
            const bool same = a.status == 0 && b.status == 0 && a.out == b.out &&
                              !a.out.empty();
            ok = ok && same;
            detail += same ? " [" + args.substr(0, args.find(' ')) + ": identical]"
                           : " [" + args + ": DIFFERS or failed]";
        }
        line(11, ok, "byte-identical reruns:" + detail);
    }

    if (g_failed == 0) {
        std::printf("all 11 criteria hold\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failed);
    return 1;
}
