// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include "sawecho/cli.hpp"
#include "sawecho/study.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

using namespace sawecho;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

EchoResult forward_trace(int nq) {
    EchoConfig c;
    c.num_qubits = nq;
    c.epsilon = 1e-2;
    c.reversal_time = 20;
    c.realizations = 400;
    c.mode = EchoMode::trace;
    return run_trace(c);
}

// Records 0..20 of a trace are the forward evolution.
double plateau_entropy(const EchoResult& r) {
    double s = 0;
    for (int t = 10; t <= 20; ++t) s += r.records[static_cast<std::size_t>(t)].entropy_mean;
    return s / 11;
}

double max_eof(const EchoResult& r, int from, int to) {
    double e = 0;
    for (int t = from; t <= to; ++t) e = std::max(e, r.records[static_cast<std::size_t>(t)].eof_mean);
    return e;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "sawecho");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace

int main() {
    std::printf("acceptance suite, %u hardware threads\n", std::thread::hardware_concurrency());

    {
        const auto start = Clock::now();
        double worst = 0;
        for (int nq = 2; nq <= 5; ++nq) {
            const auto prog = build_map_iteration({nq, 5.0, kDefaultThetaOffset}, Direction::forward);
            worst = std::max(worst, max_deviation_up_to_phase(program_unitary(prog),
                                                              dense_map_unitary<double>(nq, 5.0, kDefaultThetaOffset)));
        }
        const double secs = seconds_since(start);
        report(1, worst < 1e-10 && secs < 1.0,
               fmt("gate program vs dense unitary, n_q=2..5: max deviation %.2e (limit 1e-10), %.3f s (limit 1 s)",
                   worst, secs));
    }

    {
        const auto start = Clock::now();
        double e_dev = 0, s_max = 0, f_dev = 0;
        for (int nq = 4; nq <= 10; ++nq) {
            EchoConfig c;
            c.num_qubits = nq;
            c.epsilon = 0;
            c.reversal_time = 20;
            c.realizations = 1;
            c.mode = EchoMode::trace;
            const EchoRecord last = run_trace(c).records.back();
            e_dev = std::max(e_dev, std::abs(last.eof_mean - 1));
            s_max = std::max(s_max, last.entropy_mean);
            f_dev = std::max(f_dev, 1 - last.fidelity_mean);
        }
        report(2, e_dev < 1e-10 && s_max < 1e-10 && f_dev < 1e-10,
               fmt("noiseless echo n_q=4..10, t_r=20: |E-1| %.1e, S %.1e, 1-f %.1e (limits 1e-10), %.2f s", e_dev,
                   s_max, f_dev, seconds_since(start)));
    }

    {
        TwoQubitDensity<double> bell = TwoQubitDensity<double>::Zero();
        bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
        const TwoQubitDensity<double> mixed = TwoQubitDensity<double>::Identity() / 4.0;
        const double cb = concurrence(bell);
        const double bell_dev = std::max(std::abs(cb - 1), std::abs(eof(cb) - 1));
        const double mixed_dev = std::max(concurrence(mixed), std::abs(von_neumann_entropy(mixed) - 2));
        double closed = 0, oracle = 0;
        for (int i = 0; i < 50; ++i) {
            const double p = i / 49.0;
            const TwoQubitDensity<double> w = p * bell + (1 - p) * mixed;
            const double c = concurrence(w);
            const double expected = std::max(0.0, (3 * p - 1) / 2);
            closed = std::max(closed, std::abs(c - expected));
            oracle = std::max(oracle, std::abs(expected - testing::concurrence_hermitian_route(w)));
        }
        report(3, bell_dev < 1e-10 && mixed_dev < 1e-10 && closed < 1e-10 && oracle < 1e-10,
               fmt("Bell dev %.1e, I/4 dev %.1e, Werner 50 p: library %.1e, eigendecomposition oracle %.1e "
                   "(limits 1e-10)",
                   bell_dev, mixed_dev, closed, oracle));
    }

    double criterion4_secs = 0;
    {
        const auto start = Clock::now();
        const EchoResult r8 = forward_trace(8);
        const EchoResult r5 = forward_trace(5);
        criterion4_secs = seconds_since(start);
        const double s8 = plateau_entropy(r8), s5 = plateau_entropy(r5);
        const bool ok8 = std::abs(s8 - 1.954916) <= 0.03;
        const bool ok5 = std::abs(s5 - 1.639266) <= 0.05;
        report(4, ok8 && ok5,
               fmt("time-averaged S over t=10..20: n_q=8 %.4f (target 1.954916 +- 0.03), n_q=5 %.4f (target "
                   "1.639266 +- 0.05), %.1f s",
                   s8, s5, criterion4_secs));

        const double e8 = max_eof(r8, 5, 20), e5 = max_eof(r5, 5, 20);
        report(5, e8 < 0.02 && e5 < 0.02,
               fmt("max over t=5..20 of mean E: n_q=8 %.2e, n_q=5 %.2e (limit 0.02)", e8, e5));
    }

    StudySummary all;
    {
        const auto start = Clock::now();
        StudyConfig eps_scan;
        eps_scan.qubit_list = {6};
        eps_scan.epsilon_list = {0.01, 0.015, 0.02, 0.03, 0.04};
        eps_scan.realizations = 200;
        const StudySummary by_eps = run_study(eps_scan);

        StudyConfig nq_scan;
        nq_scan.qubit_list = {4, 5, 7, 8};
        nq_scan.epsilon_list = {0.02};
        nq_scan.realizations = 200;
        StudySummary others = run_study(nq_scan);

        std::vector<StudyPoint> fixed_eps;
        for (const StudyPoint& p : others.points) fixed_eps.push_back(p);
        for (const StudyPoint& p : by_eps.points) {
            if (p.epsilon == 0.02) fixed_eps.push_back(p);
        }
        std::sort(fixed_eps.begin(), fixed_eps.end(),
                  [](const StudyPoint& a, const StudyPoint& b) { return a.num_qubits < b.num_qubits; });
        const StudySummary by_nq = summarize(fixed_eps);

        std::vector<StudyPoint> points = by_eps.points;
        for (const StudyPoint& p : others.points) points.push_back(p);
        all = summarize(points);

        const auto& scan = by_eps.epsilon_scans.at(0);
        const double te_exp = scan.threshold ? scan.threshold->exponent : FitResult::nan;
        const double gamma_exp = scan.entropy ? scan.entropy->exponent : FitResult::nan;
        const double nq_exp = by_nq.qubit_scan ? by_nq.qubit_scan->exponent : FitResult::nan;
        const bool ok_te = std::abs(te_exp + 2) <= 0.25;
        const bool ok_gamma = std::abs(gamma_exp - 2) <= 0.25;
        const bool ok_nq = std::abs(nq_exp + 2) <= 0.35;

        std::string te_list, nq_list;
        for (const StudyPoint& p : by_eps.points) {
            te_list += fmt(" %.3g", p.threshold ? p.threshold->t_e_star : FitResult::nan);
        }
        for (const StudyPoint& p : by_nq.points) {
            nq_list += fmt(" %.3g", p.threshold ? p.threshold->t_e_star : FitResult::nan);
        }
        report(6, ok_te && ok_gamma && ok_nq,
               fmt("n_q=6: t_e*(eps) slope %.3f [%s], Gamma(eps) slope %.3f [%s] (target -2/+2 +- 0.25); "
                   "eps=0.02: t_e*(n_q) slope %.3f [%s] (target -2 +- 0.35); t_e* n_q=6 eps=1..4e-2:%s; "
                   "n_q=4..8:%s; %.0f s",
                   te_exp, ok_te ? "ok" : "out", gamma_exp, ok_gamma ? "ok" : "out", nq_exp, ok_nq ? "ok" : "out",
                   te_list.c_str(), nq_list.c_str(), seconds_since(start)));
    }

    {
        const double fa = all.a_hat / kPaperA, fb = all.b_hat / kPaperB;
        auto within2 = [](double f) { return f >= 0.5 && f <= 2.0; };
        report(7, within2(fa) && within2(fb),
               fmt("A_hat %.4g = %.3g x reference 6.04e-2, B_hat %.4g = %.3g x reference 2.34 (limit factor 2); "
                   "C_hat %.4g",
                   all.a_hat, fa, all.b_hat, fb, all.c_hat));
    }

    {
        std::vector<double> ratios;
        std::string listing;
        for (const StudyPoint& p : all.points) {
            if (p.num_qubits != 6) continue;
            if (p.epsilon != 0.01 && p.epsilon != 0.02 && p.epsilon != 0.03) continue;
            const double r = p.entropy && p.fidelity ? p.entropy->rate / p.fidelity->rate : FitResult::nan;
            ratios.push_back(r);
            listing += fmt(" eps=%.2g: %.3f", p.epsilon, r);
        }
        double mean = 0;
        for (double r : ratios) mean += r;
        mean /= static_cast<double>(ratios.size());
        double spread = 0;
        for (double r : ratios) spread = std::max(spread, std::abs(r / mean - 1));
        report(8, ratios.size() == 3 && spread <= 0.30,
               fmt("Gamma / fidelity rate at n_q=6:%s; max deviation from mean %.1f%% (limit 30%%)", listing.c_str(),
                   100 * spread));
    }

    {
        const fs::path dir = fs::temp_directory_path() / "sawecho_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        auto path = [&](const char* name) { return (dir / name).string(); };
        bool same = true;
        std::string detail;
        auto compare = [&](const std::string& label, const std::string& a, const std::string& b) {
            const bool eq = !slurp(a).empty() && slurp(a) == slurp(b);
            same = same && eq;
            detail += " " + label + (eq ? " identical" : " DIFFER");
        };
        const std::vector<std::string> trace{"trace", "--nq", "6", "--tr", "15", "--epsilon", "0.02",
                                             "--realizations", "64", "--seed", "11"};
        const std::vector<std::string> curve{"echo-curve", "--nq", "5", "--tr-grid", "1..20", "--epsilon", "0.03",
                                             "--realizations", "64", "--seed", "11"};
        const std::vector<std::string> scaling{"scaling", "--nq-list", "4", "--epsilon-list", "0.02,0.03,0.04",
                                               "--realizations", "32", "--seed", "11"};
        auto with_out = [](std::vector<std::string> args, const std::string& out) {
            args.push_back("--out");
            args.push_back(out);
            return args;
        };
        int codes = 0;
        codes += invoke(with_out(trace, path("trace_a.csv")));
        codes += invoke(with_out(trace, path("trace_b.csv")));
        compare("trace", path("trace_a.csv"), path("trace_b.csv"));
        codes += invoke(with_out(curve, path("curve_a.csv")));
        codes += invoke(with_out(curve, path("curve_b.csv")));
        compare("echo-curve", path("curve_a.csv"), path("curve_b.csv"));
        codes += invoke({"rerun", "--manifest", path("curve_a.manifest.json"), "--out", path("curve_c.csv")});
        compare("echo-curve via manifest", path("curve_a.csv"), path("curve_c.csv"));
        codes += invoke(with_out(scaling, path("scaling_a.csv")));
        codes += invoke(with_out(scaling, path("scaling_b.csv")));
        compare("scaling", path("scaling_a.csv"), path("scaling_b.csv"));
        report(9, same && codes == 0, "re-runs with identical flags and seed:" + detail);
    }

    {
        EchoConfig c;
        c.num_qubits = 10;
        c.epsilon = 1e-2;
        c.reversal_grid = {20};
        c.realizations = 1;
        c.threads = 1;
        c.mode = EchoMode::echo_curve;
        const auto start = Clock::now();
        run_echo_curve(c);
        const double single = seconds_since(start);
        report(10, single < 2.0 && criterion4_secs < 300.0,
               fmt("single echo n_q=10, t_r=20: %.3f s (limit 2 s); criterion-4 runs %.1f s (limit 300 s)", single,
                   criterion4_secs));
    }

    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
