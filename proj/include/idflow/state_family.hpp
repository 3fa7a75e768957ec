#pragma once

#include <functional>
#include <vector>

#include "idflow/density.hpp"

namespace idflow {

using ParameterPoint = Eigen::VectorXd;

/// A differentiable map from a real parameter vector to a density matrix.
/// The analytic derivative evaluator is optional; numeric_derivatives is
/// used where it is absent.
struct StateFamily {
    int dim_param = 0;
    std::function<DensityMatrix(const ParameterPoint&)> evaluate;
    // (point, mu) -> d rho / d x_mu; leave empty for finite differences
    std::function<ComplexMatrix(const ParameterPoint&, int)> analytic_derivative;

    bool has_analytic_derivative() const {
        return static_cast<bool>(analytic_derivative);
    }
};

/// Central-difference parameter derivatives, Hermitized. The step for
/// coordinate mu is step * max(1, |x_mu|); Richardson extrapolation is
/// applied when numerics().fd_richardson is set. Throws EvaluationFailed
/// if the family cannot be evaluated in the step neighborhood.
std::vector<ComplexMatrix> numeric_derivatives(const StateFamily& family,
                                               const ParameterPoint& x0,
                                               double step);

/// Analytic derivatives when available (validated Hermitian traceless),
/// numeric otherwise.
std::vector<ComplexMatrix> family_derivatives(const StateFamily& family,
                                              const ParameterPoint& x0);

} // namespace idflow
