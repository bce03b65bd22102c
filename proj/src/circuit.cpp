#include "sawecho/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sawecho {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap_phase(double phase) { return std::remainder(phase, kTwoPi); }

bool is_gate(const ProgramStep& step) { return !std::holds_alternative<BitReversal>(step); }

}  // namespace

void GateProgram::append(const ProgramStep& step) {
    std::visit(overloaded{
                   [&](const Hadamard& g) { detail::check_qubit(num_qubits_, g.target); },
                   [&](const ControlledPhase& g) {
                       detail::check_qubit(num_qubits_, g.control);
                       detail::check_qubit(num_qubits_, g.target);
                       if (g.control == g.target) {
                           throw std::invalid_argument("controlled phase needs distinct qubits");
                       }
                   },
                   [&](const PhaseShift& g) { detail::check_qubit(num_qubits_, g.target); },
                   [](const BitReversal&) {},
               },
               step);
    steps_.push_back(step);
    if (is_gate(step)) ++gate_count_;
}

void GateProgram::append(const GateProgram& other) {
    if (other.num_qubits_ != num_qubits_) {
        throw std::invalid_argument("appending a program on a different register");
    }
    steps_.insert(steps_.end(), other.steps_.begin(), other.steps_.end());
    gate_count_ += other.gate_count_;
}

GateProgram GateProgram::inverse() const {
    GateProgram inv(num_qubits_);
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        inv.append(std::visit(overloaded{
                                  [](const Hadamard& g) -> ProgramStep { return g; },
                                  [](const ControlledPhase& g) -> ProgramStep {
                                      return ControlledPhase{g.control, g.target, -g.phase};
                                  },
                                  [](const PhaseShift& g) -> ProgramStep { return PhaseShift{g.target, -g.phase}; },
                                  [](const BitReversal& g) -> ProgramStep { return g; },
                              },
                              *it));
    }
    return inv;
}

double MapParams::period() const { return kTwoPi / static_cast<double>(levels()); }

double MapParams::kick_strength() const { return chaos_k / period(); }

GateProgram build_quadratic_phase_program(double coefficient, int num_qubits, int sign, double shift) {
    if (!std::isfinite(coefficient) || !std::isfinite(shift)) {
        throw std::invalid_argument("phase coefficient and shift must be finite");
    }
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count out of range");
    }
    // j = sum_q w_q x_q with weight w_q = 2^(n - q), x_q^2 = x_q. Then
    //   (j + s)^2 = sum_q (w_q^2 + 2 s w_q) x_q + sum_{q<l} 2 w_q w_l x_q x_l + s^2.
    const double scale = sign * coefficient;
    GateProgram program(num_qubits);
    for (int q = 1; q <= num_qubits; ++q) {
        const double wq = std::ldexp(1.0, num_qubits - q);
        for (int l = q + 1; l <= num_qubits; ++l) {
            const double wl = std::ldexp(1.0, num_qubits - l);
            program.append(ControlledPhase{q, l, wrap_phase(scale * 2 * wq * wl)});
        }
    }
    for (int q = 1; q <= num_qubits; ++q) {
        const double wq = std::ldexp(1.0, num_qubits - q);
        program.append(PhaseShift{q, wrap_phase(scale * wq * (wq + 2 * shift))});
    }
    return program;
}

GateProgram build_qft_program(int num_qubits, Direction direction) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count out of range");
    }
    GateProgram program(num_qubits);
    for (int q = 1; q <= num_qubits; ++q) {
        program.append(Hadamard{q});
        for (int l = q + 1; l <= num_qubits; ++l) {
            program.append(ControlledPhase{l, q, std::numbers::pi / std::ldexp(1.0, l - q)});
        }
    }
    if (num_qubits > 1) program.append(BitReversal{});
    return direction == Direction::forward ? program : program.inverse();
}

GateProgram build_map_iteration(const MapParams& params, Direction direction) {
    const int n = params.num_qubits;
    const double levels = static_cast<double>(params.levels());
    GateProgram program(n);
    // k (theta_j - pi)^2 / 2 = (K pi / N) (j + s - N/2)^2
    program.append(build_quadratic_phase_program(params.chaos_k * std::numbers::pi / levels, n, +1,
                                                 params.theta_offset - levels / 2));
    program.append(build_qft_program(n, Direction::forward));
    // -T m^2 / 2 = -(pi / N) m^2; the unshifted momentum differs from the
    // torus-centred one by a global phase only (N even).
    program.append(build_quadratic_phase_program(std::numbers::pi / levels, n, -1, 0.0));
    program.append(build_qft_program(n, Direction::backward));
    return direction == Direction::forward ? program : program.inverse();
}

Gate2<double> tilted_hadamard(double tilt) {
    double nx, nz;
    if (tilt == 0.0) {
        nx = nz = std::numbers::sqrt2 / 2;
    } else {
        nx = std::cos(std::numbers::pi / 4 + tilt);
        nz = std::sin(std::numbers::pi / 4 + tilt);
    }
    Gate2<double> h;
    h << nz, nx, nx, -nz;
    return h;
}

void apply(const GateProgram& program, StateVector& state) {
    NoiseStream unused(0);
    apply_noisy(program, state, NoiseModel{0.0}, unused);
}

void apply_noisy(const GateProgram& program, StateVector& state, const NoiseModel& noise, NoiseStream& stream) {
    if (program.num_qubits() != state.num_qubits()) {
        throw std::invalid_argument("program and register sizes differ");
    }
    if (!(noise.epsilon >= 0)) {
        throw std::invalid_argument("noise strength must be non-negative");
    }
    const bool noisy = noise.epsilon > 0;
    const Gate2<double> ideal_h = tilted_hadamard(0.0);
    auto draw = [&] { return noisy ? stream.symmetric(noise.epsilon) : 0.0; };
    for (const ProgramStep& step : program.steps()) {
        std::visit(overloaded{
                       [&](const Hadamard& g) {
                           apply_single_qubit(state, g.target, noisy ? tilted_hadamard(draw()) : ideal_h);
                       },
                       [&](const ControlledPhase& g) {
                           apply_controlled_phase(state, g.control, g.target, g.phase + draw());
                       },
                       [&](const PhaseShift& g) { apply_phase_shift(state, g.target, g.phase + draw()); },
                       [&](const BitReversal&) { apply_bit_reversal(state); },
                   },
                   step);
    }
}

DenseOperator<double> program_unitary(const GateProgram& program) {
    const int n = program.num_qubits();
    if (n > kMaxOracleQubits) {
        throw std::out_of_range("program_unitary supports at most 12 qubits");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    DenseOperator<double> u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        StateVector::Amplitudes basis = StateVector::Amplitudes::Zero(dim);
        basis(col) = 1.0;
        StateVector psi(n, std::move(basis));
        apply(program, psi);
        u.col(col) = psi.amplitudes();
    }
    return u;
}

}  // namespace sawecho
