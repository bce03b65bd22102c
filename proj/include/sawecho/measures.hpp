#pragma once

// Two-qubit entanglement measures on rho_12: Wootters concurrence,
// entanglement of formation and Von Neumann entropy.

#include "sawecho/qstate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace sawecho {

inline constexpr double kEigenClamp = 1e-10;
inline constexpr double kImagTolerance = 1e-8;
/// Eigenvalues of rho rho~ below this fraction of the largest one are
/// round-off and are set to zero before taking square roots.
inline constexpr double kRankFloor = 1e-14;

struct MeasureSet {
    double concurrence = 0;
    double eof = 0;
    double entropy = 0;
    double fidelity = 0;
};

class InvalidDensity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checks Hermiticity, unit trace and positivity within the given tolerances.
template <typename Scalar>
bool is_valid_density(const TwoQubitDensity<Scalar>& rho, Scalar tol = Scalar(1e-12),
                      Scalar psd_tol = Scalar(kEigenClamp)) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho.trace() - Complex<Scalar>(1)) > tol) return false;
    Eigen::SelfAdjointEigenSolver<TwoQubitDensity<Scalar>> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -psd_tol;
}

/// sigma_y (x) sigma_y in the computational basis.
template <typename Scalar>
TwoQubitDensity<Scalar> spin_flip_operator() {
    TwoQubitDensity<Scalar> yy = TwoQubitDensity<Scalar>::Zero();
    yy(0, 3) = -1;
    yy(1, 2) = 1;
    yy(2, 1) = 1;
    yy(3, 0) = -1;
    return yy;
}

/// Square roots of the eigenvalues of R = rho rho~, in decreasing order.
///
/// R is not Hermitian; its eigenvalues are real and non-negative in exact
/// arithmetic. Imaginary parts above kImagTolerance and real parts below
/// -kEigenClamp mean rho was not a density matrix.
template <typename Scalar>
std::array<Scalar, 4> wootters_lambdas(const TwoQubitDensity<Scalar>& rho) {
    const TwoQubitDensity<Scalar> yy = spin_flip_operator<Scalar>();
    const TwoQubitDensity<Scalar> flipped = yy * rho.conjugate() * yy;
    const TwoQubitDensity<Scalar> r = rho * flipped;
    Eigen::ComplexEigenSolver<TwoQubitDensity<Scalar>> es(r, false);
    if (es.info() != Eigen::Success) {
        throw InvalidDensity("eigen-solver failed on rho * rho~");
    }
    const Scalar floor = Scalar(kRankFloor) * es.eigenvalues().cwiseAbs().maxCoeff();
    std::array<Scalar, 4> lambdas{};
    for (int i = 0; i < 4; ++i) {
        const Complex<Scalar> ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > Scalar(kImagTolerance) || ev.real() < -Scalar(kEigenClamp)) {
            throw InvalidDensity("rho * rho~ has an eigenvalue off the non-negative axis");
        }
        // sqrt turns 1e-17 of round-off into 3e-9 of concurrence.
        lambdas[i] = ev.real() > floor ? std::sqrt(ev.real()) : Scalar(0);
    }
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    return lambdas;
}

template <typename Scalar>
Scalar concurrence(const TwoQubitDensity<Scalar>& rho) {
    const auto l = wootters_lambdas(rho);
    return std::clamp(l[0] - l[1] - l[2] - l[3], Scalar(0), Scalar(1));
}

/// h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
template <typename Scalar>
Scalar binary_entropy(Scalar x) {
    auto term = [](Scalar p) { return p > 0 ? -p * std::log2(p) : Scalar(0); };
    return term(x) + term(1 - x);
}

/// Entanglement of formation in bits from the concurrence.
template <typename Scalar>
Scalar eof(Scalar c) {
    if (!(c >= 0 && c <= 1)) {
        throw std::domain_error("concurrence outside [0, 1]");
    }
    return binary_entropy((1 + std::sqrt(1 - c * c)) / 2);
}

/// -Tr rho log2 rho.
template <typename Scalar>
Scalar von_neumann_entropy(const TwoQubitDensity<Scalar>& rho) {
    Eigen::SelfAdjointEigenSolver<TwoQubitDensity<Scalar>> es(rho, Eigen::EigenvaluesOnly);
    Scalar s = 0;
    for (int i = 0; i < 4; ++i) {
        const Scalar mu = es.eigenvalues()(i);
        if (mu < -Scalar(kEigenClamp)) {
            throw InvalidDensity("density matrix has a negative eigenvalue");
        }
        if (mu > 0) s -= mu * std::log2(mu);
    }
    return std::max(s, Scalar(0));
}

/// Ergodic two-qubit entropy 2 - 8/(N ln 2) for an N-level register.
inline double ergodic_entropy_reference(double levels) {
    if (levels < 8) {
        throw std::domain_error("ergodic entropy reference needs N >= 8");
    }
    return 2.0 - 8.0 / (levels * std::numbers::ln2);
}

/// For a nearly diagonal rho (off-diagonals and diagonal deviation from 1/4
/// bounded by offdiag_bound), true iff the concurrence vanishes. Vacuously
/// true when rho is not nearly diagonal.
template <typename Scalar>
bool diagonal_ergodic_eof_check(const TwoQubitDensity<Scalar>& rho, Scalar offdiag_bound) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const Scalar bound_ref = i == j ? std::abs(rho(i, i) - Complex<Scalar>(0.25)) : std::abs(rho(i, j));
            if (bound_ref > offdiag_bound) return true;
        }
    }
    return concurrence(rho) == Scalar(0);
}

template <typename Scalar>
MeasureSet measure_pair(const BasicStateVector<Scalar>& state, const BasicStateVector<Scalar>& reference) {
    const TwoQubitDensity<Scalar> rho = partial_trace_12(state);
    MeasureSet m;
    m.concurrence = concurrence(rho);
    m.eof = eof(m.concurrence);
    m.entropy = von_neumann_entropy(rho);
    m.fidelity = fidelity(state, reference);
    return m;
}

}  // namespace sawecho
