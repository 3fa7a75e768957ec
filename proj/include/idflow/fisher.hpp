#pragma once

#include <vector>

#include "idflow/density.hpp"
#include "idflow/state_family.hpp"

namespace idflow {

/// Symmetric logarithmic derivatives L_mu of a state, one per parameter.
struct SLDSet {
    std::vector<ComplexMatrix> operators;
    double kernel_threshold = 0.0;
};

/// Solves d_rho = 1/2 {rho, L} for Hermitian L in the eigenbasis of rho:
/// L_jk = 2 (d_rho)_jk / (p_j + p_k) where p_j + p_k > kernel_threshold,
/// zero otherwise (minimal-norm convention; kernel components are
/// unobservable in the metric). Throws UnsupportedDerivative if a blocked
/// component of d_rho exceeds the residual tolerance: the derivative then
/// leaves the support of rho and the metric is ill-defined there.
ComplexMatrix sld(const DensityMatrix& rho, const ComplexMatrix& drho,
                  double kernel_threshold);

SLDSet sld_set(const DensityMatrix& rho,
               const std::vector<ComplexMatrix>& derivatives,
               double kernel_threshold);

/// d x d real symmetric positive-semidefinite metric at a parameter point.
struct FisherMetric {
    RealMatrix g;
    ParameterPoint point; // may be empty when not tied to a model point
};

/// g_mu_nu = 1/8 Re Tr[{L_mu, L_nu} rho]. The trace is real for valid
/// inputs; an imaginary residue above 1e-10 raises Error.
FisherMetric qfm(const DensityMatrix& rho, const SLDSet& slds);
FisherMetric qfm(const DensityMatrix& rho, const SLDSet& slds,
                 const ParameterPoint& point);

/// Convenience pipeline: family derivatives -> SLDs -> metric.
FisherMetric qfm_at(const StateFamily& family, const ParameterPoint& x0);

/// sqrt(det g) with the determinant taken as the eigenvalue product in
/// log space. Noise eigenvalues in [-metric_psd_tol, 0] are clamped to
/// zero; anything below that raises NegativeDeterminant.
double idqs(const FisherMetric& metric);

/// Inverse via eigendecomposition. Throws SingularMetric when any
/// eigenvalue is at or below the singular threshold.
RealMatrix metric_inverse(const FisherMetric& metric,
                          double singular_threshold);
RealMatrix metric_inverse(const FisherMetric& metric);

/// dg_mu_nu/dt from the operator identity
///   dg_mu_nu/dt = 1/2 Tr[L_nu (2 d_mu - L_mu)(drho_dt)
///                      + L_mu (2 d_nu - L_nu)(drho_dt)],
/// where ddrho_dt_dparam[mu] supplies the directional derivative of
/// drho_dt along parameter mu (for generator-driven flows, the generator
/// applied to d_mu rho).
RealMatrix metric_time_derivative(const ComplexMatrix& drho_dt,
                                  const SLDSet& slds,
                                  const std::vector<ComplexMatrix>& ddrho_dt_dparam);

/// Relative intrinsic density flow 1/2 tr[g^-1 dg/dt]. Throws
/// SingularMetric where the metric is not invertible.
double ridf(const DensityMatrix& rho, const ComplexMatrix& drho_dt,
            const SLDSet& slds,
            const std::vector<ComplexMatrix>& ddrho_dt_dparam,
            const FisherMetric& metric);

/// Intrinsic density flow: the product ridf * idqs.
double idf(double ridf_value, double idqs_value);

/// Single-parameter information along a fixed tangent: F(t) = 4 x' g(t) x.
/// Returns dF/dt on a uniform grid of spacing dt (central differences in
/// the interior, one-sided second order at the ends). Requires >= 3
/// samples, else GridTooShort.
std::vector<double> qfif_single(const std::vector<FisherMetric>& metric_series,
                                const RealVector& curve_tangent, double dt);

} // namespace idflow
