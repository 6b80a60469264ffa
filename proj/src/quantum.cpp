#include "sparq/quantum.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace sparq::quantum {

namespace {

using Complex = std::complex<double>;
using Matrix16c = Eigen::Matrix<Complex, 16, 16>;
using Vector4c = Eigen::Vector4cd;

double clamp01(double x) {
    return std::min(1.0, std::max(0.0, x));
}

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::domain_error("transmissivity must lie in [0, 1]");
    }
}

// V diag(sqrt(max(lambda, 0))) V^dag of a Hermitian matrix.
Matrix4c psd_sqrt(const Matrix4c& m) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(m);
    Eigen::Vector4d roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * roots.asDiagonal() *
           solver.eigenvectors().adjoint();
}

// Four-qubit joint state indexed as i = a*8 + b*2 + c with a, c single
// qubits and b the two middle qubits taken together (b in [0, 4)).
Matrix16c joint_state(const Matrix4c& rho_ab, const Matrix4c& rho_bc) {
    Matrix16c joint;
    for (int i = 0; i < 16; ++i) {
        const int a = i >> 3, b1 = (i >> 2) & 1, b2 = (i >> 1) & 1, c = i & 1;
        for (int j = 0; j < 16; ++j) {
            const int a2 = j >> 3, b1p = (j >> 2) & 1, b2p = (j >> 1) & 1, c2 = j & 1;
            joint(i, j) = rho_ab(a * 2 + b1, a2 * 2 + b1p) * rho_bc(b2 * 2 + c, b2p * 2 + c2);
        }
    }
    return joint;
}

// Projector onto a two-qubit state of the middle pair, extended by the
// identity on the outer qubits.
Matrix16c middle_projector(const Vector4c& bell) {
    Matrix16c p = Matrix16c::Zero();
    for (int i = 0; i < 16; ++i) {
        const int a = i >> 3, b = (i >> 1) & 3, c = i & 1;
        for (int j = 0; j < 16; ++j) {
            const int a2 = j >> 3, b2 = (j >> 1) & 3, c2 = j & 1;
            if (a == a2 && c == c2) {
                p(i, j) = bell(b) * std::conj(bell(b2));
            }
        }
    }
    return p;
}

// I (x) I (x) I (x) u acting on the last qubit.
Matrix16c last_qubit_op(const Matrix2c& u) {
    Matrix16c out = Matrix16c::Zero();
    for (int i = 0; i < 16; ++i) {
        const int head = i >> 1, c = i & 1;
        for (int c2 = 0; c2 < 2; ++c2) {
            out(i, head * 2 + c2) = u(c, c2);
        }
    }
    return out;
}

// Trace over the middle pair, leaving the (first, last) qubits.
Matrix4c trace_out_middle(const Matrix16c& m) {
    Matrix4c out = Matrix4c::Zero();
    for (int a = 0; a < 2; ++a) {
        for (int c = 0; c < 2; ++c) {
            for (int a2 = 0; a2 < 2; ++a2) {
                for (int c2 = 0; c2 < 2; ++c2) {
                    Complex sum = 0.0;
                    for (int b = 0; b < 4; ++b) {
                        sum += m(a * 8 + b * 2 + c, a2 * 8 + b * 2 + c2);
                    }
                    out(a * 2 + c, a2 * 2 + c2) = sum;
                }
            }
        }
    }
    return out;
}

}  // namespace

DensityMatrix::DensityMatrix(const Matrix4c& matrix) : matrix_(matrix) {
    const double herm_err = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > kHermitianTol) {
        throw std::domain_error("density matrix is not Hermitian");
    }
    const double trace_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    if (trace_err > kTraceTol) {
        throw std::domain_error("density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(matrix_);
    if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
        throw std::domain_error("density matrix has a negative eigenvalue");
    }
}

nlohmann::json DensityMatrix::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) {
            row.push_back({matrix_(r, c).real(), matrix_(r, c).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

KrausPair amplitude_damping_kraus(double eta) {
    check_eta(eta);
    KrausPair pair;
    pair.k0 << 1.0, 0.0, 0.0, std::sqrt(eta);
    pair.k1 << 0.0, std::sqrt(1.0 - eta), 0.0, 0.0;
    return pair;
}

DensityMatrix bell_phi_plus() {
    // Exact entries keep lossless pipelines at fidelity 1 bit-for-bit.
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return DensityMatrix(m);
}

DensityMatrix apply_amplitude_damping(const DensityMatrix& rho, Qubit qubit, double eta) {
    const KrausPair kraus = amplitude_damping_kraus(eta);
    const Matrix2c id = Matrix2c::Identity();
    Matrix4c result = Matrix4c::Zero();
    for (const Matrix2c& k : {kraus.k0, kraus.k1}) {
        Matrix4c op = Matrix4c::Zero();
        const Matrix2c& left = (qubit == Qubit::First) ? k : id;
        const Matrix2c& right = (qubit == Qubit::First) ? id : k;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                op.block<2, 2>(2 * i, 2 * j) = left(i, j) * right;
            }
        }
        result += op * rho.matrix() * op.adjoint();
    }
    return DensityMatrix(result);
}

double entanglement_fidelity(const DensityMatrix& rho) {
    const Matrix4c& m = rho.matrix();
    // <phi+| rho |phi+> written out so exact inputs give exact outputs.
    return clamp01(0.5 * (m(0, 0) + m(0, 3) + m(3, 0) + m(3, 3)).real());
}

double entanglement_fidelity_uhlmann(const DensityMatrix& rho) {
    const Matrix4c root = psd_sqrt(rho.matrix());
    const Matrix4c target = bell_phi_plus().matrix();
    const Matrix4c inner = root * target * root;
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(inner);
    // The inner matrix has rank one, so eigenvalues at rounding-noise
    // scale are spurious; summing their square roots would swamp the
    // trace.
    const double cutoff = std::max(0.0, solver.eigenvalues().maxCoeff()) * 1e-13;
    double trace_of_root = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double eigenvalue = solver.eigenvalues()(i);
        if (eigenvalue > cutoff) {
            trace_of_root += std::sqrt(eigenvalue);
        }
    }
    return clamp01(trace_of_root * trace_of_root);
}

DensityMatrix link_pair(double eta_left, double eta_right) {
    DensityMatrix rho = apply_amplitude_damping(bell_phi_plus(), Qubit::First, eta_left);
    return apply_amplitude_damping(rho, Qubit::Second, eta_right);
}

DensityMatrix entanglement_swap(const DensityMatrix& rho_ab, const DensityMatrix& rho_bc) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::array<Vector4c, 4> bells;
    bells[0] << inv_sqrt2, 0.0, 0.0, inv_sqrt2;    // phi+
    bells[1] << inv_sqrt2, 0.0, 0.0, -inv_sqrt2;   // phi-
    bells[2] << 0.0, inv_sqrt2, inv_sqrt2, 0.0;    // psi+
    bells[3] << 0.0, inv_sqrt2, -inv_sqrt2, 0.0;   // psi-

    Matrix2c pauli_x, pauli_z;
    pauli_x << 0.0, 1.0, 1.0, 0.0;
    pauli_z << 1.0, 0.0, 0.0, -1.0;
    // Fixup that maps the post-measurement outer pair back to phi+.
    const std::array<Matrix2c, 4> fixups = {Matrix2c::Identity(), pauli_z, pauli_x,
                                            Matrix2c(pauli_z * pauli_x)};

    const Matrix16c joint = joint_state(rho_ab.matrix(), rho_bc.matrix());
    Matrix4c averaged = Matrix4c::Zero();
    for (int outcome = 0; outcome < 4; ++outcome) {
        const Matrix16c projector = middle_projector(bells[outcome]);
        const Matrix16c fixup = last_qubit_op(fixups[outcome]);
        const Matrix16c branch =
            fixup * projector * joint * projector.adjoint() * fixup.adjoint();
        averaged += trace_out_middle(branch);
    }
    return DensityMatrix(averaged);
}

}  // namespace sparq::quantum
