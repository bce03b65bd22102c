#include "sawecho/scaling.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace sawecho {

std::string to_string(FitKind kind) {
    switch (kind) {
        case FitKind::threshold: return "threshold";
        case FitKind::exponential_rate: return "exponential_rate";
        case FitKind::power_law: return "power_law";
    }
    return "unknown";
}

LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw FitError("x and y lengths differ");
    if (x.size() < 2) throw FitError("need at least two points for a line");
    const Eigen::Index n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = x[static_cast<std::size_t>(i)];
        design(i, 1) = 1.0;
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    if ((design.col(0).array() - design(0, 0)).abs().maxCoeff() == 0.0) {
        throw FitError("all abscissae are equal");
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd resid = design * coef - rhs;
    return {coef(0), coef(1), std::sqrt(resid.squaredNorm() / static_cast<double>(n))};
}

FitResult threshold_time(std::span<const CurvePoint> curve, double c) {
    if (curve.empty()) throw FitError("empty curve");
    if (!(curve.front().value > c)) {
        throw FitError("curve does not start above the threshold");
    }
    FitResult fit;
    fit.kind = FitKind::threshold;
    fit.window = c;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const CurvePoint& a = curve[i - 1];
        const CurvePoint& b = curve[i];
        if (a.value > c && b.value <= c) {
            fit.t_e_star = a.t + (a.value - c) / (a.value - b.value) * (b.t - a.t);
            fit.n_points = static_cast<int>(i + 1);
            return fit;
        }
    }
    throw ThresholdNotReached("curve never drops to the threshold; extend the grid");
}

namespace {

FitResult log_linear_rate(const std::vector<double>& t, const std::vector<double>& log_values, double window) {
    if (t.size() < 3) throw FitError("fewer than three usable points");
    const LinearFit line = least_squares_line(t, log_values);
    FitResult fit;
    fit.kind = FitKind::exponential_rate;
    fit.rate = -line.slope;
    fit.intercept = line.intercept;
    fit.residual = line.residual;
    fit.n_points = static_cast<int>(t.size());
    fit.window = window;
    return fit;
}

}  // namespace

FitResult entropy_rate(std::span<const CurvePoint> curve, double s_inf, double min_gap) {
    std::vector<double> t, y;
    for (const CurvePoint& p : curve) {
        const double gap = s_inf - p.value;
        if (gap > min_gap) {
            t.push_back(p.t);
            y.push_back(std::log(gap));
        }
    }
    return log_linear_rate(t, y, min_gap);
}

FitResult fidelity_rate(std::span<const CurvePoint> curve, double floor) {
    std::vector<double> t, y;
    for (const CurvePoint& p : curve) {
        if (p.value > floor) {
            t.push_back(p.t);
            y.push_back(std::log(p.value));
        }
    }
    return log_linear_rate(t, y, floor);
}

FitResult power_law_fit(std::span<const CurvePoint> points) {
    if (points.size() < 3) throw FitError("power law fit needs at least three points");
    std::vector<double> x, y;
    for (const CurvePoint& p : points) {
        if (!(p.t > 0) || !(p.value > 0)) throw FitError("power law data must be positive");
        x.push_back(std::log10(p.t));
        y.push_back(std::log10(p.value));
    }
    const LinearFit line = least_squares_line(x, y);
    FitResult fit;
    fit.kind = FitKind::power_law;
    fit.exponent = line.slope;
    fit.intercept = line.intercept;
    fit.amplitude = std::pow(10.0, line.intercept);
    fit.residual = line.residual;
    fit.n_points = static_cast<int>(points.size());
    return fit;
}

double decay_constant(double fidelity_rate, double epsilon, int gates_per_iteration) {
    if (!(epsilon > 0) || gates_per_iteration <= 0) {
        throw FitError("decay constant needs eps > 0 and a positive gate count");
    }
    return fidelity_rate / (epsilon * epsilon * gates_per_iteration);
}

}  // namespace sawecho
