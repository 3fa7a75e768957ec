#pragma once

#include <limits>
#include <string>
#include <vector>

#include "idflow/fisher.hpp"
#include "idflow/master_equation.hpp"
#include "idflow/state_family.hpp"

namespace idflow {

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

/// Fixed-step classical RK4 on the vectorized state over the given grid,
/// advancing with two half steps per interval and using the full-step
/// difference as the error estimate. States are Hermitized after each
/// step. Throws StepTooLarge when the half-step estimate exceeds the
/// integrator tolerance, PoleOnGrid when a rate is non-finite at an
/// evaluation time.
Trajectory integrate(const MasterEquation& me, const DensityMatrix& rho0,
                     const std::vector<double>& t_grid);

/// Per-channel metric derivative at unit rate:
///   -1/2 Re Tr{([A, L_nu]^+ [A, L_mu] + [A, L_mu]^+ [A, L_nu]) rho}.
/// Negative semidefinite for every channel.
RealMatrix channel_metric_derivative(const ComplexMatrix& A,
                                     const DensityMatrix& rho,
                                     const SLDSet& slds);

/// Sub-flow through one channel: (gamma/2) tr[g^-1 d] idqs. Its sign is
/// opposite to gamma (the channel derivative is negative semidefinite).
double sub_idf(double gamma, const RealMatrix& channel_deriv,
               const FisherMetric& metric, double idqs_value);

/// Flow quantities at one grid time. When the metric is singular or the
/// family loses rank, the flow fields are NaN and `defined` is false;
/// `reason` carries the failure description. idqs stays meaningful where
/// computable.
struct FlowRecord {
    double t = 0.0;
    double idqs = std::numeric_limits<double>::quiet_NaN();
    double idf = std::numeric_limits<double>::quiet_NaN();
    double ridf = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> sub_idf;
    std::vector<double> gamma;
    bool defined = false;
    std::string reason;
};

/// Co-integrates the state and all parameter derivatives (each obeys the
/// same linear generator since the generator is parameter-independent)
/// and emits one FlowRecord per grid time.
std::vector<FlowRecord> flow_series(const MasterEquation& me,
                                    const StateFamily& family,
                                    const ParameterPoint& x0,
                                    const std::vector<double>& t_grid);

} // namespace idflow
