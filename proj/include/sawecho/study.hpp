#pragma once

// Scaling study over a (n_q, eps) grid: echo curves, per-point fits, and
// the power laws t_e* = A / (n_q^2 eps^2), Gamma = B eps^2 n_q^2.

#include "sawecho/echo.hpp"
#include "sawecho/scaling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sawecho {

inline constexpr double kPaperA = 6.04e-2;
inline constexpr double kPaperB = 2.34;

/// Reversal times t_r covering the gate-error budget x = eps^2 n_g t_e:
/// every integer up to x = dense_budget, then `tail_points` evenly spaced
/// values up to x = max_budget.
std::vector<int> budget_grid(int gates_per_iteration, double epsilon, double dense_budget, double max_budget,
                             int tail_points);

struct StudyConfig {
    std::vector<int> qubit_list;
    std::vector<double> epsilon_list;
    double chaos_k = 5.0;
    double theta_offset = kDefaultThetaOffset;
    int realizations = 200;
    std::uint64_t master_seed = 1;
    int threads = 0;
    double threshold = kDefaultThreshold;
    /// Explicit t_r grid; when empty budget_grid() is used per point.
    std::vector<int> reversal_grid;
    double dense_budget = 1.5;
    double max_budget = 12.0;
    int tail_points = 30;
};

struct StudyPoint {
    int num_qubits = 0;
    double epsilon = 0;
    int gates_per_iteration = 0;
    std::vector<EchoRecord> curve;  ///< record.t = t_e
    std::optional<FitResult> threshold;
    std::optional<FitResult> entropy;
    std::optional<FitResult> fidelity;
    double decay_constant = FitResult::nan;  ///< C from the fidelity rate
    std::vector<std::string> notes;          ///< fit failures, excluded fits
};

struct StudySummary {
    std::vector<StudyPoint> points;
    /// Per n_q with >= 3 epsilons: t_e*(eps), Gamma(eps), fidelity rate(eps).
    struct EpsilonScan {
        int num_qubits;
        std::optional<FitResult> threshold, entropy, fidelity;
    };
    std::vector<EpsilonScan> epsilon_scans;
    /// t_e* eps^2 against n_q over all points with a threshold.
    std::optional<FitResult> qubit_scan;
    /// Fixed-exponent amplitudes: geometric means of t_e* n_q^2 eps^2,
    /// Gamma / (eps^2 n_q^2) and rate / (eps^2 n_g).
    double a_hat = FitResult::nan;
    double b_hat = FitResult::nan;
    double c_hat = FitResult::nan;
    std::vector<std::string> notes;
};

/// Fits one echo curve (t_e, E, S, f).
StudyPoint fit_point(int num_qubits, double epsilon, std::vector<EchoRecord> curve, double threshold);

/// Power-law fits and amplitude estimates over already fitted points.
StudySummary summarize(std::vector<StudyPoint> points);

/// Runs every (n_q, eps) echo curve, then summarize().
StudySummary run_study(const StudyConfig& config);

}  // namespace sawecho
