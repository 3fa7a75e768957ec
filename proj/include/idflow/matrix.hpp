#pragma once

#include <Eigen/Dense>
#include <complex>

namespace idflow {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
/// eigenvector columns phase-fixed (first nonzero component real positive)
/// and ordered lexicographically inside degenerate groups, so the output
/// is deterministic and usable in golden tests.
struct Spectrum {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors; // columns
};

ComplexMatrix dagger(const ComplexMatrix& m);

/// max_jk |m - m^dagger|
double hermiticity_defect(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol);

/// [a, b] = ab - ba. Throws DimMismatch.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// {a, b} = ab + ba. Throws DimMismatch.
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Throws NotHermitian if the input fails the global Hermiticity tolerance.
Spectrum hermitian_eig(const ComplexMatrix& m);

/// exp(i s H) for Hermitian H, via its spectrum.
ComplexMatrix hermitian_phase_exp(const ComplexMatrix& h, double s);

namespace pauli {
ComplexMatrix identity2();
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
/// sigma_minus maps e2 -> e1; diag(1,0) is its stationary state.
ComplexMatrix sigma_minus();
ComplexMatrix sigma_plus();
} // namespace pauli

} // namespace idflow
