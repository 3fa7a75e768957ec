#pragma once

#include <utility>
#include <vector>

#include "idflow/dynamics.hpp"
#include "idflow/master_equation.hpp"
#include "idflow/state_family.hpp"

namespace idflow {

using BlochVector = Eigen::Vector3d;

/// rho = 1/2 (I + n . sigma). Throws OutsideBall for |n|^2 > 1 + 1e-12.
DensityMatrix bloch_state(const BlochVector& n);

/// 1 / (8 sqrt(1 - |n|^2)). Throws PureBoundary at |n| >= 1 - boundary_tol.
double bloch_idqs(const BlochVector& n);

/// Three-parameter qubit family n -> rho(n) with analytic derivatives
/// sigma_mu / 2.
StateFamily bloch_family();

/// Same family in spherical coordinates (r, theta, phi).
StateFamily bloch_family_spherical();

/// Jacobian d n / d (r, theta, phi) at a spherical point.
RealMatrix bloch_spherical_jacobian(const ParameterPoint& rtp);

/// Qubit in a dissipative environment with Lorentzian spectral density at
/// zero detuning. Coupling strength W and spectral width lambda enter only
/// through W / lambda: every time below is dimensionless (units of
/// 1/lambda) and every rate is in units of lambda.
///
/// Characteristic function, with dbar = sqrt(|1 - 4 (W/lambda)^2|):
///   weak   (W < lambda/2): h(t) = e^{-t/2} [cosh(dbar t/2) + sinh(dbar t/2)/dbar]
///   strong (W >= lambda/2): h(t) = e^{-t/2} [cos(dbar t/2) + sin(dbar t/2)/dbar]
/// The 1/dbar coefficient keeps h dimensionally consistent with the
/// cos/cosh term and gives h'(0) = 0, so the decay rate
/// gamma(t) = -2 h'(t)/h(t) starts at zero.
class DissipativeModel {
  public:
    /// Throws RangeError unless lambda > 0 and W >= 0.
    DissipativeModel(double lambda, double W);

    double lambda() const { return lambda_; }
    double coupling() const { return W_; }
    bool weak() const { return weak_; }
    /// sqrt(|lambda^2 - 4 W^2|) in units of lambda.
    double d_param() const { return d_; }

    double h(double t) const;
    double h_dot(double t) const;

    /// -2 h'(t) / h(t); throws Pole where |h| < rate_pole_tol.
    double gamma(double t) const;

    /// Zeros of h in (0, t_max], ascending. Empty in the weak regime.
    std::vector<double> h_zeros(double t_max) const;

    /// n^{1,2}(t) = h n0^{1,2}; n^3(t) = h^2 (1 + n0^3) - 1.
    BlochVector motion(const BlochVector& n0, double t) const;

    /// h(t)^4 / (8 sqrt(1 - |n(t)|^2)). Throws PureBoundary.
    double idqs(const BlochVector& n0, double t) const;

    /// -(gamma/2) [3 + (1 + n^3)^2 / (1 - |n|^2)] at n = n(t).
    /// The stationary point n0 = (0,0,-1) takes the continuous limit
    /// (bracket -> 3). Throws Pole; PureBoundary off the stationary point.
    double ridf(const BlochVector& n0, double t) const;

    /// ridf * idqs.
    double idf(const BlochVector& n0, double t) const;

    /// The two parts of the flow in moving coordinates: the shift along
    /// the orbit, 1/2 tr[d/dt log g(n(t))], and the frame change,
    /// tr[d/dt log J] = 4 h'/h = -2 gamma for the Jacobian diag(h, h, h^2).
    /// Their sum equals ridf.
    std::pair<double, double> state_space_split(const BlochVector& n0,
                                                double t) const;

    /// Single sigma-like decay channel toward the n3 = -1 pole, with rate
    /// gamma(t) and declared poles up to t_max.
    MasterEquation master_equation(double t_max) const;

  private:
    double bracket_factor(const BlochVector& n0, double t) const;

    double lambda_;
    double W_;
    double wbar_; // W / lambda
    double d_;    // dbar
    bool weak_;
    bool degenerate_; // |d| below the series-limit switch
};

} // namespace idflow
