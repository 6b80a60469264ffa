#pragma once

#include <Eigen/Dense>
#include <complex>

#include "json.hpp"

namespace sparq::quantum {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

// Two-qubit state in the computational basis |00>, |01>, |10>, |11>.
// Construction validates Hermiticity, unit trace and positive
// semidefiniteness (up to floating-point tolerances) and throws
// std::domain_error on violation.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-12;
    static constexpr double kEigenvalueFloor = -1e-10;

    explicit DensityMatrix(const Matrix4c& matrix);

    const Matrix4c& matrix() const { return matrix_; }

    // Row-major array of [re, im] pairs, for debugging dumps.
    nlohmann::json to_json() const;

private:
    Matrix4c matrix_;
};

enum class Qubit { First, Second };

// Single-qubit amplitude damping operators for a channel of
// transmissivity eta:
//   K0 = [[1, 0], [0, sqrt(eta)]],  K1 = [[0, sqrt(1 - eta)], [0, 0]]
struct KrausPair {
    Matrix2c k0;
    Matrix2c k1;
};

KrausPair amplitude_damping_kraus(double eta);

// |phi+><phi+| with |phi+> = (|00> + |11>)/sqrt(2).
DensityMatrix bell_phi_plus();

// rho' = sum_i (K_i (x) I) rho (K_i (x) I)^dag   (or I (x) K_i for the
// second qubit).
DensityMatrix apply_amplitude_damping(const DensityMatrix& rho, Qubit qubit, double eta);

// Overlap <phi+| rho |phi+> with the ideal pair. Equals the general
// Uhlmann expression for this pure target; the two routes are kept as
// separate code paths and cross-checked in tests.
double entanglement_fidelity(const DensityMatrix& rho);

// ( Tr sqrt( sqrt(rho) |phi+><phi+| sqrt(rho) ) )^2 evaluated through a
// Hermitian eigendecomposition, with small negative eigenvalues clamped
// to zero before the square roots.
double entanglement_fidelity_uhlmann(const DensityMatrix& rho);

// Fresh pair with damping eta_left applied to the first qubit and
// eta_right to the second. A locally held half uses eta = 1.
DensityMatrix link_pair(double eta_left, double eta_right);

// Ideal entanglement swap: Bell measurement of the middle qubits (second
// of rho_ab, first of rho_bc), Pauli fixup on the last qubit, and the
// outcome-probability-weighted average of the corrected results.
DensityMatrix entanglement_swap(const DensityMatrix& rho_ab, const DensityMatrix& rho_bc);

}  // namespace sparq::quantum
