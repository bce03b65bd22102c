#pragma once

// State-vector register, in-place gate kernels and the dense one-iteration
// oracle for the quantum sawtooth map.
//
// Basis convention: index j encodes |a_1 a_2 ... a_n>, qubit 1 is the most
// significant bit. Qubit indices in the public API run from 1 to n.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sawecho {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using AmplitudeVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseOperator = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Gate2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;

/// 4x4 reduced density matrix of qubits 1 and 2, basis {|00>,|01>,|10>,|11>}.
template <typename Scalar>
using TwoQubitDensity = Eigen::Matrix<Complex<Scalar>, 4, 4>;

inline constexpr int kMaxQubits = 30;
inline constexpr int kMaxOracleQubits = 12;

/// Cell-centred angle grid theta_j = 2 pi (j + 1/2) / N. With the integer
/// grid (offset 0) and integer K the map is a quantized cat map with exact
/// short recurrences.
inline constexpr double kDefaultThetaOffset = 0.5;

/// Register of n qubits holding 2^n amplitudes.
template <typename Scalar>
class BasicStateVector {
public:
    using Amplitudes = AmplitudeVector<Scalar>;

    /// |0...0> on n qubits.
    explicit BasicStateVector(int num_qubits)
        : num_qubits_(checked_qubits(num_qubits)),
          amps_(Amplitudes::Zero(Eigen::Index{1} << num_qubits)) {
        amps_(0) = Scalar(1);
    }

    BasicStateVector(int num_qubits, Amplitudes amps)
        : num_qubits_(checked_qubits(num_qubits)), amps_(std::move(amps)) {
        if (amps_.size() != (Eigen::Index{1} << num_qubits_)) {
            throw std::invalid_argument("amplitude vector length is not 2^num_qubits");
        }
    }

    int num_qubits() const noexcept { return num_qubits_; }
    Eigen::Index dimension() const noexcept { return amps_.size(); }

    const Amplitudes& amplitudes() const noexcept { return amps_; }
    Amplitudes& amplitudes() noexcept { return amps_; }

    Complex<Scalar> operator[](Eigen::Index j) const { return amps_(j); }
    Complex<Scalar>& operator[](Eigen::Index j) { return amps_(j); }

    Scalar squared_norm() const { return amps_.squaredNorm(); }

private:
    static int checked_qubits(int n) {
        if (n < 1 || n > kMaxQubits) {
            throw std::invalid_argument("qubit count out of range: " + std::to_string(n));
        }
        return n;
    }

    int num_qubits_;
    Amplitudes amps_;
};

using StateVector = BasicStateVector<double>;

namespace detail {

inline void check_qubit(int num_qubits, int qubit) {
    if (qubit < 1 || qubit > num_qubits) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside 1.." +
                                std::to_string(num_qubits));
    }
}

/// Bit mask of a 1-based qubit index under the MSB convention.
inline std::size_t qubit_mask(int num_qubits, int qubit) {
    return std::size_t{1} << (num_qubits - qubit);
}

}  // namespace detail

template <typename Scalar>
bool is_unitary(const Gate2<Scalar>& u, Scalar tol = Scalar(1e-12)) {
    return ((u.adjoint() * u) - Gate2<Scalar>::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Applies a 2x2 unitary to one qubit, in place.
template <typename Scalar>
void apply_single_qubit(BasicStateVector<Scalar>& state, int target, const Gate2<Scalar>& u) {
    detail::check_qubit(state.num_qubits(), target);
    if (!is_unitary(u)) {
        throw std::invalid_argument("single-qubit gate is not unitary");
    }
    const std::size_t stride = detail::qubit_mask(state.num_qubits(), target);
    const std::size_t dim = static_cast<std::size_t>(state.dimension());
    Complex<Scalar>* a = state.amplitudes().data();
    const Complex<Scalar> u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
        for (std::size_t j = block; j < block + stride; ++j) {
            const Complex<Scalar> lo = a[j];
            const Complex<Scalar> hi = a[j + stride];
            a[j] = u00 * lo + u01 * hi;
            a[j + stride] = u10 * lo + u11 * hi;
        }
    }
}

/// Multiplies every amplitude whose control and target bits are both 1 by e^{i phase}.
template <typename Scalar>
void apply_controlled_phase(BasicStateVector<Scalar>& state, int control, int target, Scalar phase) {
    detail::check_qubit(state.num_qubits(), control);
    detail::check_qubit(state.num_qubits(), target);
    if (control == target) {
        throw std::invalid_argument("controlled phase needs distinct control and target");
    }
    const std::size_t mask = detail::qubit_mask(state.num_qubits(), control) |
                             detail::qubit_mask(state.num_qubits(), target);
    const Complex<Scalar> factor = std::polar(Scalar(1), phase);
    const std::size_t dim = static_cast<std::size_t>(state.dimension());
    Complex<Scalar>* a = state.amplitudes().data();
    for (std::size_t j = 0; j < dim; ++j) {
        if ((j & mask) == mask) a[j] *= factor;
    }
}

/// diag(1, e^{i phase}) on one qubit.
template <typename Scalar>
void apply_phase_shift(BasicStateVector<Scalar>& state, int target, Scalar phase) {
    detail::check_qubit(state.num_qubits(), target);
    const std::size_t mask = detail::qubit_mask(state.num_qubits(), target);
    const Complex<Scalar> factor = std::polar(Scalar(1), phase);
    const std::size_t dim = static_cast<std::size_t>(state.dimension());
    Complex<Scalar>* a = state.amplitudes().data();
    for (std::size_t j = 0; j < dim; ++j) {
        if (j & mask) a[j] *= factor;
    }
}

inline std::size_t reverse_bits(std::size_t j, int num_bits) {
    std::size_t r = 0;
    for (int b = 0; b < num_bits; ++b) {
        r = (r << 1) | ((j >> b) & 1u);
    }
    return r;
}

/// Reorders amplitudes by reversing the bit string of every basis index.
/// Self-inverse.
template <typename Scalar>
void apply_bit_reversal(BasicStateVector<Scalar>& state) {
    const int n = state.num_qubits();
    const std::size_t dim = static_cast<std::size_t>(state.dimension());
    Complex<Scalar>* a = state.amplitudes().data();
    for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t r = reverse_bits(j, n);
        if (r > j) std::swap(a[j], a[r]);
    }
}

/// rho_12 = Tr_{3..n} |psi><psi|.
///
/// With qubit 1 as MSB the amplitudes reshape row-major into a 4 x (N/4)
/// matrix A whose row is the (a_1 a_2) pair, so rho_12 = A A^dagger.
template <typename Scalar>
TwoQubitDensity<Scalar> partial_trace_12(const BasicStateVector<Scalar>& state) {
    if (state.num_qubits() < 2) {
        throw std::invalid_argument("partial_trace_12 needs at least two qubits");
    }
    using RowMajor = Eigen::Matrix<Complex<Scalar>, 4, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Index env = state.dimension() / 4;
    Eigen::Map<const RowMajor> a(state.amplitudes().data(), 4, env);
    TwoQubitDensity<Scalar> rho = a * a.adjoint();
    return rho;
}

/// |<state|reference>|^2, clipped to 1 against rounding of normalized inputs.
template <typename Scalar>
Scalar fidelity(const BasicStateVector<Scalar>& state, const BasicStateVector<Scalar>& reference) {
    if (state.num_qubits() != reference.num_qubits()) {
        throw std::invalid_argument("fidelity of registers with different qubit counts");
    }
    return std::min(std::norm(state.amplitudes().dot(reference.amplitudes())), Scalar(1));
}

/// One sawtooth-map iteration U = exp(-i T n^2/2) exp(i k (theta - pi)^2/2)
/// as a dense N x N matrix in the theta (register) representation.
///
/// Built independently of the gate program: explicit DFT matrix with the
/// momentum convention <n|theta_j> = e^{-i n theta_j}/sqrt(N), momenta on
/// the torus -N/2 <= n < N/2, T = 2 pi / N, k = K / T and the angle grid
/// theta_j = 2 pi (j + theta_offset) / N.
template <typename Scalar>
DenseOperator<Scalar> dense_map_unitary(int num_qubits, Scalar chaos_k,
                                        Scalar theta_offset = Scalar(kDefaultThetaOffset)) {
    if (num_qubits < 2 || num_qubits > kMaxOracleQubits) {
        throw std::out_of_range("dense oracle supports 2..12 qubits");
    }
    using std::numbers::pi_v;
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    const Scalar two_pi = 2 * pi_v<Scalar>;
    const Scalar period = two_pi / Scalar(dim);
    const Scalar kick_strength = chaos_k / period;

    DenseOperator<Scalar> fourier(dim, dim);
    const Scalar inv_sqrt = Scalar(1) / std::sqrt(Scalar(dim));
    for (Eigen::Index row = 0; row < dim; ++row) {
        const Eigen::Index momentum = row - dim / 2;
        for (Eigen::Index col = 0; col < dim; ++col) {
            // Reduce n*j mod N before forming the angle; the grid offset
            // contributes a momentum-dependent phase only.
            const Eigen::Index prod = ((momentum * col) % dim + dim) % dim;
            fourier(row, col) = std::polar(
                inv_sqrt, -two_pi * (Scalar(prod) + Scalar(momentum) * theta_offset) / Scalar(dim));
        }
    }

    AmplitudeVector<Scalar> kick(dim), free(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Scalar theta = two_pi * (Scalar(j) + theta_offset) / Scalar(dim);
        const Scalar arg = kick_strength * (theta - pi_v<Scalar>) * (theta - pi_v<Scalar>) / 2;
        kick(j) = std::polar(Scalar(1), std::remainder(arg, two_pi));
        const Scalar momentum = Scalar(j - dim / 2);
        free(j) = std::polar(Scalar(1), std::remainder(-period * momentum * momentum / 2, two_pi));
    }

    DenseOperator<Scalar> u = fourier.adjoint() * free.asDiagonal() * fourier * kick.asDiagonal();
    return u;
}

/// Multiplies `op` by the unit phase that makes its largest-magnitude
/// entry match `reference` at the same position, then returns the max
/// entrywise deviation.
template <typename Scalar>
Scalar max_deviation_up_to_phase(const DenseOperator<Scalar>& op, const DenseOperator<Scalar>& reference) {
    if (op.rows() != reference.rows() || op.cols() != reference.cols()) {
        throw std::invalid_argument("operator shape mismatch");
    }
    Eigen::Index r = 0, c = 0;
    reference.cwiseAbs().maxCoeff(&r, &c);
    const Complex<Scalar> ratio = reference(r, c) / op(r, c);
    const Complex<Scalar> phase = ratio / std::abs(ratio);
    return (op * phase - reference).cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar max_deviation_up_to_phase(const AmplitudeVector<Scalar>& v, const AmplitudeVector<Scalar>& reference) {
    return max_deviation_up_to_phase(DenseOperator<Scalar>(v), DenseOperator<Scalar>(reference));
}

}  // namespace sawecho
