#pragma once

// Gate-level quantum sawtooth map: Hadamard / controlled-phase / phase-shift
// programs for one map iteration and its inverse, with per-gate unitary noise.

#include "sawecho/qstate.hpp"
#include "sawecho/random.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace sawecho {

struct Hadamard {
    int target;
};

struct ControlledPhase {
    int control;
    int target;
    double phase;
};

struct PhaseShift {
    int target;
    double phase;
};

/// Noise-free relabelling of basis states (QFT output order). Not a gate.
struct BitReversal {};

using GateDescriptor = std::variant<Hadamard, ControlledPhase, PhaseShift>;
using ProgramStep = std::variant<Hadamard, ControlledPhase, PhaseShift, BitReversal>;

enum class Direction { forward, backward };

class GateProgram {
public:
    GateProgram() = default;
    explicit GateProgram(int num_qubits) : num_qubits_(num_qubits) {}

    int num_qubits() const noexcept { return num_qubits_; }
    const std::vector<ProgramStep>& steps() const noexcept { return steps_; }

    /// Elementary gates emitted, permutations excluded.
    int gate_count() const noexcept { return gate_count_; }

    void append(const ProgramStep& step);
    void append(const GateProgram& other);

    /// Reversed order, phases negated; Hadamard and bit reversal self-inverse.
    GateProgram inverse() const;

private:
    int num_qubits_ = 0;
    int gate_count_ = 0;
    std::vector<ProgramStep> steps_;
};

struct MapParams {
    int num_qubits;
    double chaos_k = 5.0;
    /// Angle grid theta_j = 2 pi (j + theta_offset) / N.
    double theta_offset = kDefaultThetaOffset;

    std::int64_t levels() const { return std::int64_t{1} << num_qubits; }
    /// T = 2 pi / N.
    double period() const;
    /// k = K / T.
    double kick_strength() const;
};

/// Diagonal unitary exp(i sign coefficient (j + shift)^2) expanded over bits:
/// pair terms become controlled phases, square and linear terms become phase
/// shifts, and the constant term is dropped as a global phase.
///
/// The kick uses shift = theta_offset - N/2, the free rotation shift = 0.
GateProgram build_quadratic_phase_program(double coefficient, int num_qubits, int sign, double shift = 0.0);

/// QFT |j> -> N^{-1/2} sum_k e^{2 pi i jk/N} |k> (backward: its inverse).
GateProgram build_qft_program(int num_qubits, Direction direction);

/// Kick phases, QFT, free-rotation phases, inverse QFT; backward is the
/// exact inverse program.
GateProgram build_map_iteration(const MapParams& params, Direction direction);

inline int gates_per_iteration(int num_qubits) { return 2 * num_qubits * num_qubits + 2 * num_qubits; }

/// Hadamard with its axis tilted by `tilt` radians in the x-z plane:
/// n = (cos(pi/4 + tilt), 0, sin(pi/4 + tilt)), gate n . sigma.
Gate2<double> tilted_hadamard(double tilt);

struct NoiseModel {
    double epsilon = 0;
};

/// Applies the ideal program.
void apply(const GateProgram& program, StateVector& state);

/// Applies the program with fresh uniform [-eps, eps] errors on every gate,
/// drawn from `stream` in program order. eps = 0 consumes no draws and is
/// bit-identical to apply().
void apply_noisy(const GateProgram& program, StateVector& state, const NoiseModel& noise, NoiseStream& stream);

/// Dense unitary of the ideal program, column by column (small n only).
DenseOperator<double> program_unitary(const GateProgram& program);

}  // namespace sawecho
