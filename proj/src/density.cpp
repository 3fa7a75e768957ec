#include "idflow/density.hpp"

#include <sstream>

#include "idflow/errors.hpp"
#include "idflow/numerics.hpp"

namespace idflow {

DensityMatrix validate_density(const ComplexMatrix& m,
                               const DensityTolerances& tol) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        std::ostringstream msg;
        msg << "validate_density: matrix is " << m.rows() << "x" << m.cols();
        throw DimMismatch(msg.str());
    }
    if (!m.allFinite()) {
        throw Error("validate_density: non-finite entries");
    }

    const double defect = hermiticity_defect(m);
    if (defect > tol.hermitian) {
        std::ostringstream msg;
        msg << "validate_density: Hermiticity defect " << defect
            << " exceeds " << tol.hermitian;
        throw NotHermitian(msg.str());
    }

    const Complex tr = m.trace();
    const double trace_err = std::abs(tr - Complex(1.0, 0.0));
    if (trace_err > tol.trace) {
        std::ostringstream msg;
        msg << "validate_density: |trace - 1| = " << trace_err << " exceeds "
            << tol.trace;
        throw TraceNotOne(msg.str());
    }

    // Work with the Hermitized matrix so the eigenvalue check sees the
    // same operator later consumers do.
    const ComplexMatrix herm = 0.5 * (m + m.adjoint());
    const Spectrum spec = hermitian_eig(herm);
    const double min_eig = spec.eigenvalues.minCoeff();
    if (min_eig < -tol.eigenvalue_floor) {
        std::ostringstream msg;
        msg << "validate_density: eigenvalue " << min_eig << " below -"
            << tol.eigenvalue_floor;
        throw NegativeEigenvalue(msg.str());
    }

    return DensityMatrix(herm);
}

DensityMatrix validate_density(const ComplexMatrix& m) {
    const NumericsConfig& cfg = numerics();
    return validate_density(
        m, DensityTolerances{cfg.algebraic_tol, cfg.trace_tol, cfg.psd_tol});
}

} // namespace idflow
