#include "sawecho/echo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sawecho {

namespace {

// Realizations are reduced in fixed blocks merged in index order, so the
// result does not depend on the thread count or completion order.
constexpr int kBlockSize = 16;

struct TimeStats {
    RunningStats eof, entropy, fidelity;

    void add(const MeasureSet& m) {
        eof.add(m.eof);
        entropy.add(m.entropy);
        fidelity.add(m.fidelity);
    }

    void merge(const TimeStats& other) {
        eof.merge(other.eof);
        entropy.merge(other.entropy);
        fidelity.merge(other.fidelity);
    }

    EchoRecord record(int t) const {
        EchoRecord r;
        r.t = t;
        r.eof_mean = eof.mean();
        r.eof_std = eof.stddev();
        r.entropy_mean = entropy.mean();
        r.entropy_std = entropy.stddev();
        r.fidelity_mean = fidelity.mean();
        r.fidelity_std = fidelity.stddev();
        r.samples = eof.count();
        r.eof_sem = eof.standard_error();
        r.entropy_sem = entropy.standard_error();
        r.fidelity_sem = fidelity.standard_error();
        return r;
    }
};

int worker_count(int requested, std::size_t units) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(n, 1);
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(units, 1)));
}

/// Runs body(unit) for unit in [0, units) on a small pool; rethrows the
/// first exception.
template <class Body>
void parallel_for(std::size_t units, int threads, Body body) {
    const int workers = worker_count(threads, units);
    if (workers == 1) {
        for (std::size_t u = 0; u < units; ++u) body(u);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t u = next++; u < units; u = next++) {
                try {
                    body(u);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = units;
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

struct Programs {
    GateProgram forward;
    GateProgram backward;

    explicit Programs(const EchoConfig& c)
        : forward(build_map_iteration({c.num_qubits, c.chaos_k, c.theta_offset}, Direction::forward)), backward(forward.inverse()) {}
};

}  // namespace

void EchoConfig::validate() const {
    if (num_qubits < 2 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("num_qubits must be at least 2");
    }
    if (!std::isfinite(chaos_k)) throw std::invalid_argument("K must be finite");
    if (!std::isfinite(theta_offset)) throw std::invalid_argument("theta offset must be finite");
    if (!(epsilon >= 0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be >= 0");
    if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    if (first_realization < 0) throw std::invalid_argument("first_realization must be >= 0");
    if (mode == EchoMode::trace) {
        if (reversal_time < 0) throw std::invalid_argument("reversal time must be >= 0");
    } else {
        if (reversal_grid.empty()) throw std::invalid_argument("reversal grid is empty");
        for (std::size_t i = 0; i < reversal_grid.size(); ++i) {
            if (reversal_grid[i] < 0) throw std::invalid_argument("reversal grid values must be >= 0");
            if (i > 0 && reversal_grid[i] <= reversal_grid[i - 1]) {
                throw std::invalid_argument("reversal grid must be strictly increasing");
            }
        }
    }
}

StateVector initial_state(int num_qubits) {
    if (num_qubits < 2) {
        throw std::invalid_argument("initial state needs at least two qubits");
    }
    StateVector::Amplitudes a = StateVector::Amplitudes::Zero(Eigen::Index{1} << num_qubits);
    const double r = std::sqrt(0.5);
    a(0) = r;
    a(Eigen::Index{3} << (num_qubits - 2)) = r;
    return StateVector(num_qubits, std::move(a));
}

EchoResult run_trace(const EchoConfig& config) {
    config.validate();
    if (config.mode != EchoMode::trace) throw std::invalid_argument("run_trace needs trace mode");
    const Programs programs(config);
    const NoiseModel noise{config.epsilon};
    const StateVector psi0 = initial_state(config.num_qubits);
    const int tr = config.reversal_time;
    const std::size_t times = static_cast<std::size_t>(2 * tr + 1);
    const int blocks = (config.realizations + kBlockSize - 1) / kBlockSize;

    std::vector<std::vector<TimeStats>> block_stats(static_cast<std::size_t>(blocks), std::vector<TimeStats>(times));
    EchoResult result;
    if (config.keep_raw) {
        result.raw.assign(times, std::vector<MeasureSet>(static_cast<std::size_t>(config.realizations)));
    }

    parallel_for(static_cast<std::size_t>(blocks), config.threads, [&](std::size_t b) {
        const int begin = static_cast<int>(b) * kBlockSize;
        const int end = std::min(begin + kBlockSize, config.realizations);
        auto& stats = block_stats[b];
        for (int r = begin; r < end; ++r) {
            NoiseStream stream(config.master_seed, 0, static_cast<std::uint64_t>(config.first_realization + r));
            StateVector psi = psi0;
            auto record = [&](int t) {
                const MeasureSet m = measure_pair(psi, psi0);
                stats[static_cast<std::size_t>(t)].add(m);
                if (config.keep_raw) result.raw[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)] = m;
            };
            record(0);
            for (int t = 1; t <= 2 * tr; ++t) {
                apply_noisy(t <= tr ? programs.forward : programs.backward, psi, noise, stream);
                record(t);
            }
        }
    });

    std::vector<TimeStats> total(times);
    for (const auto& block : block_stats) {
        for (std::size_t t = 0; t < times; ++t) total[t].merge(block[t]);
    }
    result.records.reserve(times);
    for (std::size_t t = 0; t < times; ++t) result.records.push_back(total[t].record(static_cast<int>(t)));
    return result;
}

EchoResult run_echo_curve(const EchoConfig& config) {
    config.validate();
    if (config.mode != EchoMode::echo_curve) throw std::invalid_argument("run_echo_curve needs echo-curve mode");
    const Programs programs(config);
    const NoiseModel noise{config.epsilon};
    const StateVector psi0 = initial_state(config.num_qubits);
    const std::size_t points = config.reversal_grid.size();
    const std::size_t blocks = static_cast<std::size_t>((config.realizations + kBlockSize - 1) / kBlockSize);

    // Work unit = (grid point, block); longest experiments first.
    std::vector<TimeStats> unit_stats(points * blocks);
    EchoResult result;
    if (config.keep_raw) {
        result.raw.assign(points, std::vector<MeasureSet>(static_cast<std::size_t>(config.realizations)));
    }

    parallel_for(points * blocks, config.threads, [&](std::size_t unit) {
        const std::size_t g = points - 1 - unit / blocks;
        const std::size_t b = unit % blocks;
        const int tr = config.reversal_grid[g];
        const int begin = static_cast<int>(b) * kBlockSize;
        const int end = std::min(begin + kBlockSize, config.realizations);
        TimeStats& stats = unit_stats[g * blocks + b];
        for (int r = begin; r < end; ++r) {
            NoiseStream stream(config.master_seed, g, static_cast<std::uint64_t>(config.first_realization + r));
            StateVector psi = psi0;
            for (int t = 0; t < tr; ++t) apply_noisy(programs.forward, psi, noise, stream);
            for (int t = 0; t < tr; ++t) apply_noisy(programs.backward, psi, noise, stream);
            const MeasureSet m = measure_pair(psi, psi0);
            stats.add(m);
            if (config.keep_raw) result.raw[g][static_cast<std::size_t>(r)] = m;
        }
    });

    result.records.reserve(points);
    for (std::size_t g = 0; g < points; ++g) {
        TimeStats total;
        for (std::size_t b = 0; b < blocks; ++b) total.merge(unit_stats[g * blocks + b]);
        result.records.push_back(total.record(2 * config.reversal_grid[g]));
    }
    return result;
}

EchoResult run(const EchoConfig& config) {
    return config.mode == EchoMode::trace ? run_trace(config) : run_echo_curve(config);
}

}  // namespace sawecho
