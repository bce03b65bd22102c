#pragma once

// Forward-backward entanglement echo experiments averaged over noise
// realizations.

#include "sawecho/circuit.hpp"
#include "sawecho/measures.hpp"
#include "sawecho/stats.hpp"

#include <cstdint>
#include <vector>

namespace sawecho {

enum class EchoMode { trace, echo_curve };

struct EchoConfig {
    int num_qubits = 5;
    double chaos_k = 5.0;
    double theta_offset = kDefaultThetaOffset;
    int reversal_time = 20;  ///< t_r, trace mode
    double epsilon = 0.01;
    int realizations = 400;
    std::uint64_t master_seed = 1;
    EchoMode mode = EchoMode::trace;
    std::vector<int> reversal_grid;  ///< t_r values, echo-curve mode
    int threads = 0;                 ///< 0: hardware concurrency
    int first_realization = 0;       ///< realization indices start here
    bool keep_raw = false;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

/// Mean and spread of E, S and f at one time (trace: iteration t; echo
/// curve: echo time t_e = 2 t_r).
struct EchoRecord {
    int t = 0;
    double eof_mean = 0, eof_std = 0;
    double entropy_mean = 0, entropy_std = 0;
    double fidelity_mean = 0, fidelity_std = 0;
    std::int64_t samples = 0;
    /// Standard errors of the means.
    double eof_sem = 0, entropy_sem = 0, fidelity_sem = 0;
};

struct EchoResult {
    std::vector<EchoRecord> records;
    /// raw[time index][realization] when EchoConfig::keep_raw is set.
    std::vector<std::vector<MeasureSet>> raw;
};

/// (|00> + |11>)/sqrt2 (x) |0...0>.
StateVector initial_state(int num_qubits);

/// E, S, f after every iteration t = 0..2 t_r, inverting at t_r.
EchoResult run_trace(const EchoConfig& config);

/// One independent forward-backward experiment per grid value; records at
/// t_e = 2 t_r.
EchoResult run_echo_curve(const EchoConfig& config);

EchoResult run(const EchoConfig& config);

}  // namespace sawecho
