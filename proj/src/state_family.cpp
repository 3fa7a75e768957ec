#include "idflow/state_family.hpp"

#include <cmath>
#include <sstream>

#include "idflow/errors.hpp"
#include "idflow/numerics.hpp"

namespace idflow {

namespace {

ComplexMatrix central_difference(const StateFamily& family,
                                 const ParameterPoint& x0, int mu, double h) {
    ParameterPoint plus = x0;
    ParameterPoint minus = x0;
    plus[mu] += h;
    minus[mu] -= h;
    ComplexMatrix diff;
    try {
        diff = (family.evaluate(plus).matrix() -
                family.evaluate(minus).matrix()) /
               (2.0 * h);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "numeric_derivatives: evaluation failed near coordinate " << mu
            << ": " << e.what();
        throw EvaluationFailed(msg.str());
    }
    return 0.5 * (diff + diff.adjoint());
}

} // namespace

std::vector<ComplexMatrix> numeric_derivatives(const StateFamily& family,
                                               const ParameterPoint& x0,
                                               double step) {
    if (!family.evaluate) {
        throw EvaluationFailed("numeric_derivatives: family has no evaluator");
    }
    if (x0.size() != family.dim_param) {
        std::ostringstream msg;
        msg << "numeric_derivatives: point has " << x0.size()
            << " coordinates, family expects " << family.dim_param;
        throw DimMismatch(msg.str());
    }

    std::vector<ComplexMatrix> derivatives;
    derivatives.reserve(family.dim_param);
    for (int mu = 0; mu < family.dim_param; ++mu) {
        const double h = step * std::max(1.0, std::abs(x0[mu]));
        ComplexMatrix d = central_difference(family, x0, mu, h);
        if (numerics().fd_richardson) {
            const ComplexMatrix d_half = central_difference(family, x0, mu, h / 2.0);
            d = (4.0 * d_half - d) / 3.0;
        }
        derivatives.push_back(std::move(d));
    }
    return derivatives;
}

std::vector<ComplexMatrix> family_derivatives(const StateFamily& family,
                                              const ParameterPoint& x0) {
    if (!family.has_analytic_derivative()) {
        return numeric_derivatives(family, x0, numerics().fd_step);
    }
    std::vector<ComplexMatrix> derivatives;
    derivatives.reserve(family.dim_param);
    for (int mu = 0; mu < family.dim_param; ++mu) {
        ComplexMatrix d = family.analytic_derivative(x0, mu);
        const double defect = hermiticity_defect(d);
        const double trace_mag = std::abs(d.trace());
        if (defect > numerics().spectral_tol ||
            trace_mag > numerics().spectral_tol) {
            std::ostringstream msg;
            msg << "family_derivatives: analytic derivative " << mu
                << " not Hermitian traceless (defect " << defect << ", trace "
                << trace_mag << ")";
            throw EvaluationFailed(msg.str());
        }
        derivatives.push_back(std::move(d));
    }
    return derivatives;
}

} // namespace idflow
