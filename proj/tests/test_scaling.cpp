#include <doctest.h>

#include "sawecho/scaling.hpp"
#include "sawecho/study.hpp"

#include <cmath>
#include <vector>

using namespace sawecho;

namespace {

std::vector<CurvePoint> sample(double t0, double t1, double dt, double (*f)(double)) {
    std::vector<CurvePoint> c;
    for (double t = t0; t <= t1 + 1e-12; t += dt) c.push_back({t, f(t)});
    return c;
}

constexpr double kSinf = 1.9;

}  // namespace

TEST_CASE("threshold interpolation") {
    const std::vector<CurvePoint> c{{2, 0.95}, {4, 0.85}};
    CHECK(threshold_time(c, 0.9).t_e_star == doctest::Approx(3.0).epsilon(1e-15));

    const std::vector<CurvePoint> flat{{2, 1.0}, {4, 1.0}, {6, 1.0}};
    CHECK_THROWS_AS(threshold_time(flat, 0.9), ThresholdNotReached);
    const std::vector<CurvePoint> below{{2, 0.8}, {4, 0.7}};
    CHECK_THROWS_AS(threshold_time(below, 0.9), FitError);
    CHECK_THROWS_AS(threshold_time(std::vector<CurvePoint>{}, 0.9), FitError);
}

TEST_CASE("threshold uses the first downward crossing") {
    const std::vector<CurvePoint> c{{0, 1}, {2, 0.8}, {4, 0.95}, {6, 0.7}};
    CHECK(threshold_time(c, 0.9).t_e_star == doctest::Approx(1.0));
}

TEST_CASE("threshold invariant under grid refinement with interpolants") {
    std::vector<CurvePoint> c{{0, 1}, {2, 0.97}, {4, 0.93}, {6, 0.88}, {8, 0.8}};
    const double base = threshold_time(c, 0.9).t_e_star;
    std::vector<CurvePoint> fine;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        fine.push_back(c[i]);
        for (int k = 1; k < 4; ++k) {
            const double w = k / 4.0;
            fine.push_back({c[i].t + w * (c[i + 1].t - c[i].t), c[i].value + w * (c[i + 1].value - c[i].value)});
        }
    }
    fine.push_back(c.back());
    CHECK(std::abs(threshold_time(fine, 0.9).t_e_star - base) < 1e-12);
}

TEST_CASE("entropy rate recovers an exact saturation curve") {
    const auto c = sample(2, 40, 2, [](double t) { return kSinf * (1 - std::exp(-0.05 * t)); });
    const FitResult fit = entropy_rate(c, kSinf);
    CHECK(std::abs(fit.rate - 0.05) < 1e-6);
    CHECK(fit.residual < 1e-10);
    CHECK(fit.n_points == 20);
}

TEST_CASE("entropy rate excludes saturated points") {
    auto c = sample(2, 40, 2, [](double t) { return kSinf * (1 - std::exp(-0.05 * t)); });
    c.push_back({42, kSinf + 0.01});
    c.push_back({44, kSinf - 0.001});
    const FitResult fit = entropy_rate(c, kSinf);
    CHECK(fit.n_points == 20);
    CHECK(std::abs(fit.rate - 0.05) < 1e-6);
    CHECK_THROWS_AS(entropy_rate(std::vector<CurvePoint>{{1, kSinf}, {2, kSinf}}, kSinf), FitError);
}

TEST_CASE("fidelity rate recovers an exact exponential") {
    const auto c = sample(0, 60, 2, [](double t) { return std::exp(-0.03 * t); });
    CHECK(std::abs(fidelity_rate(c).rate - 0.03) < 1e-6);
    const auto flat = sample(0, 60, 2, [](double) { return 1.0; });
    CHECK(std::abs(fidelity_rate(flat).rate) < 1e-12);
    const std::vector<CurvePoint> floor_only{{2, 0.01}, {4, 0.01}, {6, 0.5}};
    CHECK_THROWS_AS(fidelity_rate(floor_only), FitError);
}

TEST_CASE("rates are scale equivariant") {
    const auto c = sample(2, 40, 2, [](double t) { return kSinf * (1 - std::exp(-0.07 * t)) + 0.001 * std::sin(t); });
    auto stretched = c;
    for (auto& p : stretched) p.t *= 3;
    CHECK(std::abs(entropy_rate(stretched, kSinf).rate - entropy_rate(c, kSinf).rate / 3) < 1e-10);

    const auto f = sample(0, 40, 2, [](double t) { return std::exp(-0.02 * t) * (1 + 0.01 * std::cos(t)); });
    auto fs = f;
    for (auto& p : fs) p.t *= 0.5;
    CHECK(std::abs(fidelity_rate(fs).rate - fidelity_rate(f).rate * 2) < 1e-10);
}

TEST_CASE("power law fit is exact on power-law data") {
    std::vector<CurvePoint> p;
    for (double x : {0.5, 1.0, 2.0, 3.0, 7.0}) p.push_back({x, 2 * std::pow(x, -2)});
    const FitResult fit = power_law_fit(p);
    CHECK(std::abs(fit.exponent + 2) < 1e-10);
    CHECK(std::abs(fit.amplitude - 2) < 1e-10);
    CHECK(fit.residual < 1e-10);
    CHECK(fit.kind == FitKind::power_law);

    CHECK_THROWS_AS(power_law_fit(std::vector<CurvePoint>{{1, 1}, {2, 2}}), FitError);
    CHECK_THROWS_AS(power_law_fit(std::vector<CurvePoint>{{1, 1}, {2, -2}, {3, 1}}), FitError);
    CHECK_THROWS_AS(power_law_fit(std::vector<CurvePoint>{{0, 1}, {2, 2}, {3, 1}}), FitError);
}

TEST_CASE("least squares needs distinct abscissae") {
    const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
    CHECK_THROWS_AS(least_squares_line(x, y), FitError);
}

TEST_CASE("decay constant") {
    CHECK(decay_constant(0.084, 0.02, 84) == doctest::Approx(0.084 / (4e-4 * 84)));
    CHECK_THROWS_AS(decay_constant(0.1, 0, 10), FitError);
}

TEST_CASE("budget grid covers the dense range and the tail") {
    const auto g = budget_grid(84, 0.02, 1.5, 12, 30);
    CHECK(g.front() == 0);
    for (int t = 0; t <= 23; ++t) CHECK(g[static_cast<std::size_t>(t)] == t);
    CHECK(g.back() == static_cast<int>(std::ceil(12 / (2 * 4e-4 * 84))));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK_THROWS_AS(budget_grid(84, 0, 1.5, 12, 30), std::invalid_argument);
}

TEST_CASE("summary recovers synthetic scaling laws") {
    // t_e* = A / (n_q^2 eps^2), Gamma = B eps^2 n_q^2, rate = C eps^2 n_g.
    constexpr double a = 0.2, b = 0.5, cc = 0.1;
    std::vector<StudyPoint> points;
    for (int nq : {4, 6, 8}) {
        for (double eps : {0.01, 0.02, 0.04}) {
            const int ng = 2 * nq * nq + 2 * nq;
            const double te = a / (nq * nq * eps * eps);
            const double gamma = b * eps * eps * nq * nq;
            const double rate = cc * eps * eps * ng;
            const double sinf = ergodic_entropy_reference(std::ldexp(1.0, nq));
            StudyPoint p;
            p.num_qubits = nq;
            p.epsilon = eps;
            p.gates_per_iteration = ng;
            std::vector<CurvePoint> e, s, f;
            for (int k = 0; k <= 400; ++k) {
                const double t = te * k / 100.0;
                e.push_back({t, 1 - 0.1 * t / te});
                s.push_back({t, sinf * (1 - std::exp(-gamma * t))});
                f.push_back({t, std::exp(-rate * t)});
            }
            p.threshold = threshold_time(e, 0.9);
            p.entropy = entropy_rate(s, sinf);
            p.fidelity = fidelity_rate(f);
            p.decay_constant = decay_constant(p.fidelity->rate, eps, ng);
            points.push_back(p);
        }
    }
    const StudySummary sum = summarize(points);
    CHECK(sum.a_hat == doctest::Approx(a).epsilon(1e-6));
    CHECK(sum.b_hat == doctest::Approx(b).epsilon(1e-6));
    CHECK(sum.c_hat == doctest::Approx(cc).epsilon(1e-6));
    REQUIRE(sum.epsilon_scans.size() == 3);
    for (const auto& scan : sum.epsilon_scans) {
        CHECK(scan.threshold->exponent == doctest::Approx(-2).epsilon(1e-6));
        CHECK(scan.entropy->exponent == doctest::Approx(2).epsilon(1e-6));
        CHECK(scan.fidelity->exponent == doctest::Approx(2).epsilon(1e-6));
    }
    REQUIRE(sum.qubit_scan);
    CHECK(sum.qubit_scan->exponent == doctest::Approx(-2).epsilon(1e-6));
}
