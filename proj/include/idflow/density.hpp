#pragma once

#include "idflow/matrix.hpp"

namespace idflow {

struct DensityTolerances {
    double hermitian;
    double trace;
    double eigenvalue_floor;
};

/// Hermitian, unit-trace, positive-semidefinite matrix. Instances are
/// immutable; construction goes through validate_density.
class DensityMatrix {
  public:
    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    friend DensityMatrix validate_density(const ComplexMatrix& m,
                                          const DensityTolerances& tol);

  private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

/// Checks Hermiticity, unit trace, and positive semidefiniteness against
/// the given tolerances. Throws NotHermitian, TraceNotOne, or
/// NegativeEigenvalue naming the violated invariant and its magnitude.
DensityMatrix validate_density(const ComplexMatrix& m,
                               const DensityTolerances& tol);

/// Same with tolerances from the global numerics config.
DensityMatrix validate_density(const ComplexMatrix& m);

} // namespace idflow
