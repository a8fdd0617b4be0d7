// Command-line front end: solve / shoot / verify / stability over the
// bounded solution of the recurrence  a_{n+1} + a_{n-1} = -2(n+1) a_n / (t(1-a_n^2)).
//
// Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
// 3 precision/convergence exhaustion, 4 shooting calibration failure.

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpii/bounds.hpp"
#include "dpii/opuc.hpp"

using nlohmann::ordered_json;
using namespace dpii;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string t;
    long n = 0;
    long precision = 256;
    std::string method = "bessel";
    std::string format = "csv";
    std::string out;
    std::string width;          // shoot
    std::string from, to;       // stability
    long steps = 0;             // stability
    long perturb_index = -1;    // verify testing hook
    std::string perturb_eps;    // verify testing hook
};

void emit(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::fwrite(body.data(), 1, body.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::invalid_argument("cannot open output file: " + path);
    f << body;
}

std::string csv_header(const std::string& command, const Options& opt, int digits,
                       const Real& t) {
    std::string s;
    s += "# command = " + command + "\n";
    s += "# version = " + std::string(kVersion) + "\n";
    s += "# t = " + to_decimal(t, digits) + "\n";
    s += "# n = " + std::to_string(opt.n) + "\n";
    s += "# precision = " + std::to_string(opt.precision) + "\n";
    if (command == "solve" || command == "shoot")
        s += "# method = " + (command == "shoot" ? std::string("shoot") : opt.method) + "\n";
    s += "# digits = " + std::to_string(digits) + "\n";
    return s;
}

ordered_json json_metadata(const std::string& command, const Options& opt, int digits,
                           const Real& t) {
    ordered_json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["t"] = to_decimal(t, digits);
    m["n"] = opt.n;
    m["precision"] = opt.precision;
    if (command == "solve" || command == "shoot")
        m["method"] = command == "shoot" ? "shoot" : opt.method;
    m["digits"] = digits;
    return m;
}

int run_solve(const Options& opt) {
    const Precision p = checked_precision(opt.precision);
    const int digits = decimal_digits_for(p);
    const Real t(opt.t, p);
    if (opt.method != "bessel" && opt.method != "levinson")
        throw std::invalid_argument("--method must be bessel or levinson");

    // one index past the display range so the residual column exists for
    // every displayed row
    PainleveParams params(t, opt.n + 1, p);
    VerblunskySequence sol =
        opt.method == "bessel"
            ? bessel_solution(params)
            : levinson_verblunsky(moments_from_bessel(t, opt.n + 2, p));
    MomentSequence mom = moments_from_bessel(t, opt.n, p);
    KappaSequence ks = kappa_from_verblunsky(sol);
    BoundReport bounds = check_bound(sol);

    const Real half_t = params.t / 2L;
    std::vector<std::vector<std::string>> rows;
    Real prev = VerblunskySequence::initial();
    for (long n = 0; n <= opt.n; ++n) {
        const Real& a = sol[n];
        Real residual = abs(half_t * (1L - a * a) * (sol[n + 1] + prev) + a * (n + 1));
        rows.push_back({std::to_string(n), to_decimal(a, digits),
                        to_decimal(mom.mu[static_cast<std::size_t>(n)], digits),
                        to_decimal(ks.kappa_sq[static_cast<std::size_t>(n)], digits),
                        to_decimal(bounds.rows[static_cast<std::size_t>(n)].bound, digits),
                        to_decimal(residual, digits)});
        prev = a;
    }

    static const char* kCols[] = {"n", "a_n", "mu_n", "kappa_sq_n", "bound_n", "residual_n"};
    if (opt.format == "csv") {
        std::string s = csv_header("solve", opt, digits, params.t);
        s += "n,a_n,mu_n,kappa_sq_n,bound_n,residual_n\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i)
                s += (i ? "," : "") + r[i];
            s += "\n";
        }
        emit(opt.out, s);
    } else {
        ordered_json doc;
        doc["metadata"] = json_metadata("solve", opt, digits, params.t);
        doc["rows"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json row;
            row[kCols[0]] = std::stol(r[0]);
            for (std::size_t i = 1; i < r.size(); ++i)
                row[kCols[i]] = r[i];
            doc["rows"].push_back(std::move(row));
        }
        emit(opt.out, doc.dump(2) + "\n");
    }
    return 0;
}

int run_shoot(const Options& opt) {
    const Precision p = checked_precision(opt.precision);
    const int digits = decimal_digits_for(p);
    const Real t(opt.t, p);
    if (opt.width.empty())
        throw std::invalid_argument("shoot requires --width");
    const Real width(opt.width, p);

    PainleveParams params(t, opt.n, p);
    ShootResult res = shoot(params, width);

    if (opt.format == "csv") {
        std::string s = csv_header("shoot", opt, digits, params.t);
        s += "# width = " + to_decimal(width, digits) + "\n";
        s += "iteration,lo,hi,width,exit_index,exit_side\n";
        for (const ShootStep& st : res.trace) {
            s += std::to_string(st.iteration) + "," + to_decimal(st.lo, digits) + "," +
                 to_decimal(st.hi, digits) + "," + to_decimal(st.width, digits) + "," +
                 std::to_string(*st.midpoint.exit_index) + "," +
                 std::to_string(*st.midpoint.exit_side) + "\n";
        }
        s += "final," + to_decimal(res.bracket.lo, digits) + "," +
             to_decimal(res.bracket.hi, digits) + "," +
             to_decimal(res.bracket.width(), digits) + ",,\n";
        emit(opt.out, s);
    } else {
        ordered_json doc;
        doc["metadata"] = json_metadata("shoot", opt, digits, params.t);
        doc["metadata"]["width"] = to_decimal(width, digits);
        doc["rows"] = ordered_json::array();
        for (const ShootStep& st : res.trace) {
            ordered_json row;
            row["iteration"] = st.iteration;
            row["lo"] = to_decimal(st.lo, digits);
            row["hi"] = to_decimal(st.hi, digits);
            row["width"] = to_decimal(st.width, digits);
            row["exit_index"] = *st.midpoint.exit_index;
            row["exit_side"] = *st.midpoint.exit_side;
            doc["rows"].push_back(std::move(row));
        }
        doc["bracket"]["lo"] = to_decimal(res.bracket.lo, digits);
        doc["bracket"]["hi"] = to_decimal(res.bracket.hi, digits);
        doc["bracket"]["width"] = to_decimal(res.bracket.width(), digits);
        emit(opt.out, doc.dump(2) + "\n");
    }
    return 0;
}

struct CheckRow {
    std::string name;
    bool pass;
    std::string measured;
    std::string threshold;
};

int run_verify(const Options& opt) {
    const Precision p = checked_precision(opt.precision);
    const int digits = decimal_digits_for(p);
    const Real t(opt.t, p);

    PainleveParams params(t, opt.n, p);
    VerblunskySequence sol = bessel_solution(params);
    if (opt.perturb_index >= 0) {
        if (opt.perturb_eps.empty())
            throw std::invalid_argument("--perturb-index requires --perturb-eps");
        if (opt.perturb_index >= sol.size())
            throw std::invalid_argument("--perturb-index is past the last coefficient");
        std::vector<Real> a = sol.entries();
        a[static_cast<std::size_t>(opt.perturb_index)] =
            a[static_cast<std::size_t>(opt.perturb_index)] + Real(opt.perturb_eps, p);
        sol = VerblunskySequence(sol.t(), std::move(a));
    }
    MomentSequence mom = moments_from_bessel(t, std::max(opt.n, 2L), p);
    MeasureSpec measure(t, p);

    const Real thr_identity = Real::pow2(64 - p, 64);
    const std::string thr_str = to_decimal(thr_identity, digits);
    std::vector<CheckRow> rows;
    auto residual_check = [&](const std::string& name, const Real& measured) {
        rows.push_back({name, measured <= thr_identity, to_decimal(measured, digits), thr_str});
    };

    residual_check("lemma1", verify_lemma1(sol));
    residual_check("phi_star", verify_phi_star_expansion(sol));
    residual_check("moment_recurrence", verify_moment_recurrence(mom));
    residual_check("kappa", max(kappa_ladder_deviation(sol), b_kappa_deviation(sol)));
    residual_check("gram", gram_check(sol, measure, std::min(opt.n, 10L)).max_abs);

    {
        BoundReport rep = check_bound(sol);
        Real worst = rep.rows[0].value - rep.rows[0].bound;
        for (const BoundRow& r : rep.rows)
            worst = max(worst, r.value - r.bound);
        rows.push_back({"bound", rep.all_ok, to_decimal(worst, digits),
                        to_decimal(Real(0L, 64), digits)});
    }
    residual_check("dpii_residual", dpii_residual(sol));
    {
        BoundTable bt = bound_table(params.alpha, std::min(opt.n, 30L));
        rows.push_back({"bound_table_induction", bt.induction_exact,
                        bt.induction_exact ? "0" : "1", "0"});
    }
    {
        Real prev_ratio(64);
        bool monotone = true;
        for (long n : {25L, 50L, 100L, 200L}) {
            Real ratio = stirling_ratio(n, params.alpha);
            if (n > 25 && !(ratio < prev_ratio))
                monotone = false;
            prev_ratio = ratio;
        }
        Real off = abs(prev_ratio - 1L);
        const Real thr("0.01", p);
        rows.push_back({"stirling_ratio", monotone && off <= thr, to_decimal(off, digits),
                        to_decimal(thr, digits)});
    }

    bool all_pass = true;
    for (const CheckRow& r : rows)
        all_pass = all_pass && r.pass;

    if (opt.format == "csv") {
        std::string s = csv_header("verify", opt, digits, params.t);
        s += "check,status,measured,threshold\n";
        for (const CheckRow& r : rows)
            s += r.name + "," + (r.pass ? "pass" : "fail") + "," + r.measured + "," +
                 r.threshold + "\n";
        emit(opt.out, s);
    } else {
        ordered_json doc;
        doc["metadata"] = json_metadata("verify", opt, digits, params.t);
        doc["rows"] = ordered_json::array();
        for (const CheckRow& r : rows) {
            ordered_json row;
            row["check"] = r.name;
            row["status"] = r.pass ? "pass" : "fail";
            row["measured"] = r.measured;
            row["threshold"] = r.threshold;
            doc["rows"].push_back(std::move(row));
        }
        doc["all_pass"] = all_pass;
        emit(opt.out, doc.dump(2) + "\n");
    }
    return all_pass ? 0 : 1;
}

int run_stability(const Options& opt) {
    const Precision p = checked_precision(opt.precision);
    const int digits = decimal_digits_for(p);
    const Real t(opt.t, p);
    if (opt.from.empty() || opt.to.empty() || opt.steps < 1)
        throw std::invalid_argument("stability requires --from, --to and --steps >= 1");

    PainleveParams params(t, opt.n, p);
    GridSpec grid{Real(opt.from, p), Real(opt.to, p), opt.steps};
    std::vector<EscapeRecord> map = escape_map(params, grid);

    if (opt.format == "csv") {
        std::string s = csv_header("stability", opt, digits, params.t);
        s += "# from = " + to_decimal(grid.from.round_to(p), digits) + "\n";
        s += "# to = " + to_decimal(grid.to.round_to(p), digits) + "\n";
        s += "# steps = " + std::to_string(opt.steps) + "\n";
        s += "a0,exit_index,exit_side\n";
        for (const EscapeRecord& r : map) {
            s += to_decimal(r.trial_a0, digits) + ",";
            s += r.escaped() ? std::to_string(*r.exit_index) : std::string("survived");
            s += ",";
            s += r.escaped() ? std::to_string(*r.exit_side) : std::string("-");
            s += "\n";
        }
        emit(opt.out, s);
    } else {
        ordered_json doc;
        doc["metadata"] = json_metadata("stability", opt, digits, params.t);
        doc["metadata"]["from"] = to_decimal(grid.from.round_to(p), digits);
        doc["metadata"]["to"] = to_decimal(grid.to.round_to(p), digits);
        doc["metadata"]["steps"] = opt.steps;
        doc["rows"] = ordered_json::array();
        for (const EscapeRecord& r : map) {
            ordered_json row;
            row["a0"] = to_decimal(r.trial_a0, digits);
            if (r.escaped()) {
                row["exit_index"] = *r.exit_index;
                row["exit_side"] = *r.exit_side;
            } else {
                row["exit_index"] = "survived";
                row["exit_side"] = "-";
            }
            doc["rows"].push_back(std::move(row));
        }
        emit(opt.out, doc.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounded discrete Painleve II solutions: solve, shoot, verify, stability"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool with_method) {
        sub->add_option("--t", opt.t, "recurrence parameter t > 0")->required();
        sub->add_option("--n", opt.n, "max index N >= 1")->required();
        sub->add_option("--precision", opt.precision, "working precision in bits (>= 64)");
        if (with_method)
            sub->add_option("--method", opt.method, "bessel | levinson");
        sub->add_option("--format", opt.format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", opt.out, "output file (default: stdout)");
    };

    CLI::App* solve = app.add_subcommand("solve", "solution table by a chosen method");
    add_common(solve, true);
    CLI::App* shoot_cmd = app.add_subcommand("shoot", "bracket a_0 by bisection on escape");
    add_common(shoot_cmd, false);
    shoot_cmd->add_option("--width", opt.width, "target bracket width")->required();
    CLI::App* verify = app.add_subcommand("verify", "run the named identity checks");
    add_common(verify, false);
    verify->add_option("--perturb-index", opt.perturb_index,
                       "testing hook: corrupt the coefficient at this index");
    verify->add_option("--perturb-eps", opt.perturb_eps,
                       "testing hook: perturbation added at --perturb-index");
    CLI::App* stability = app.add_subcommand("stability", "escape map over an a_0 grid");
    add_common(stability, false);
    stability->add_option("--from", opt.from, "grid start in (-1, 1)")->required();
    stability->add_option("--to", opt.to, "grid end in (-1, 1)")->required();
    stability->add_option("--steps", opt.steps, "grid point count")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed())
            return run_solve(opt);
        if (shoot_cmd->parsed())
            return run_shoot(opt);
        if (verify->parsed())
            return run_verify(opt);
        return run_stability(opt);
    } catch (const CalibrationFailure& e) {
        std::fprintf(stderr, "calibration failure: %s\n", e.what());
        return 4;
    } catch (const PrecisionExhausted& e) {
        std::fprintf(stderr, "precision exhausted: %s\n", e.what());
        return 3;
    } catch (const ConvergenceFailure& e) {
        std::fprintf(stderr, "convergence failure: %s\n", e.what());
        return 3;
    } catch (const SingularStep& e) {
        std::fprintf(stderr, "singular step: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
