#pragma once

// Decay-law extraction from echo curves: threshold time t_e*, entropy
// equilibration rate, fidelity decay rate and log-log power laws.

#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace sawecho {

struct CurvePoint {
    double t;
    double value;
};

enum class FitKind { threshold, exponential_rate, power_law };

std::string to_string(FitKind kind);

struct FitResult {
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    FitKind kind = FitKind::threshold;
    double t_e_star = nan;   ///< threshold
    double rate = nan;       ///< exponential_rate: decay rate per unit t
    double exponent = nan;   ///< power_law
    double amplitude = nan;  ///< power_law: y = amplitude * x^exponent
    double intercept = nan;  ///< regression intercept (natural or decimal log)
    double residual = 0;     ///< rms of regression residuals
    int n_points = 0;
    double window = nan;     ///< threshold c, entropy gap or fidelity floor used
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The curve never drops to the threshold; the grid must be extended.
class ThresholdNotReached : public FitError {
public:
    using FitError::FitError;
};

inline constexpr double kDefaultThreshold = 0.9;
inline constexpr double kEntropyGapFloor = 0.01;
inline constexpr double kFidelityFloor = 0.02;

struct LinearFit {
    double slope;
    double intercept;
    double residual;  ///< rms
};

/// Unweighted least squares y = slope x + intercept; needs >= 2 points with
/// distinct x.
LinearFit least_squares_line(std::span<const double> x, std::span<const double> y);

/// First downward crossing of c, linearly interpolated between grid points.
FitResult threshold_time(std::span<const CurvePoint> curve, double c = kDefaultThreshold);

/// Gamma from ln(S_inf - S) = const - Gamma t over points with S_inf - S > min_gap.
FitResult entropy_rate(std::span<const CurvePoint> curve, double s_inf, double min_gap = kEntropyGapFloor);

/// Decay rate from ln f = const - rate t over points with f > floor.
FitResult fidelity_rate(std::span<const CurvePoint> curve, double floor = kFidelityFloor);

/// log10 y = log10 amplitude + exponent log10 x.
FitResult power_law_fit(std::span<const CurvePoint> points);

/// C = rate / (eps^2 n_g).
double decay_constant(double fidelity_rate, double epsilon, int gates_per_iteration);

}  // namespace sawecho
