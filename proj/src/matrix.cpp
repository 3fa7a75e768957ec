#include "idflow/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "idflow/errors.hpp"
#include "idflow/numerics.hpp"

namespace idflow {

NumericsConfig& numerics() {
    static NumericsConfig config;
    return config;
}

ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimMismatch("hermiticity_defect: matrix is " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

namespace {

void check_same_dims(const ComplexMatrix& a, const ComplexMatrix& b,
                     const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        std::ostringstream msg;
        msg << op << ": incompatible dimensions " << a.rows() << "x"
            << a.cols() << " vs " << b.rows() << "x" << b.cols();
        throw DimMismatch(msg.str());
    }
}

// Rotate the column phase so its first component above `tol` is real
// positive.
void fix_column_phase(Eigen::Ref<Eigen::VectorXcd> v, double tol) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v[k]);
        if (mag > tol) {
            v *= std::conj(v[k]) / mag;
            v[k] = Complex(std::abs(v[k]), 0.0); // kill rounding residue
            return;
        }
    }
}

bool column_less(const ComplexMatrix& m, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const Complex& x = m(k, a);
        const Complex& y = m(k, b);
        if (x.real() != y.real()) return x.real() < y.real();
        if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
}

} // namespace

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dims(a, b, "commutator");
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dims(a, b, "anticommutator");
    return a * b + b * a;
}

Spectrum hermitian_eig(const ComplexMatrix& m) {
    const double defect = hermiticity_defect(m);
    if (defect > numerics().algebraic_tol) {
        throw NotHermitian("hermitian_eig: defect " + std::to_string(defect));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error("hermitian_eig: eigensolver failed to converge");
    }

    Spectrum spec{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index j = 0; j < spec.eigenvectors.cols(); ++j) {
        fix_column_phase(spec.eigenvectors.col(j), 1e-12);
    }

    // Deterministic order inside degenerate groups: lexicographic on the
    // phase-fixed columns.
    const double scale = std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
    const double tie_tol = 1e-12 * scale;
    Eigen::Index start = 0;
    while (start < spec.eigenvalues.size()) {
        Eigen::Index end = start + 1;
        while (end < spec.eigenvalues.size() &&
               spec.eigenvalues[end] - spec.eigenvalues[start] <= tie_tol) {
            ++end;
        }
        if (end - start > 1) {
            std::vector<Eigen::Index> order(end - start);
            std::iota(order.begin(), order.end(), start);
            std::sort(order.begin(), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          return column_less(spec.eigenvectors, a, b);
                      });
            ComplexMatrix block(spec.eigenvectors.rows(), end - start);
            RealVector vals(end - start);
            for (Eigen::Index k = 0; k < end - start; ++k) {
                block.col(k) = spec.eigenvectors.col(order[k]);
                vals[k] = spec.eigenvalues[order[k]];
            }
            spec.eigenvectors.middleCols(start, end - start) = block;
            spec.eigenvalues.segment(start, end - start) = vals;
        }
        start = end;
    }
    return spec;
}

ComplexMatrix hermitian_phase_exp(const ComplexMatrix& h, double s) {
    const Spectrum spec = hermitian_eig(h);
    Eigen::VectorXcd phases(spec.eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
        phases[k] = std::exp(Complex(0.0, s * spec.eigenvalues[k]));
    }
    return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

namespace pauli {

ComplexMatrix identity2() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

ComplexMatrix sigma_plus() {
    ComplexMatrix m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

} // namespace pauli

} // namespace idflow
