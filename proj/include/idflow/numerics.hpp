#pragma once

namespace idflow {

/// Global numerical tolerances. Defaults sit well above double-precision
/// noise for the matrix dimensions this library targets (dim <= 16).
struct NumericsConfig {
    double algebraic_tol = 1e-12;      ///< Hermiticity / trace-zero checks
    double trace_tol = 1e-10;          ///< |Tr rho - 1| bound
    double psd_tol = 1e-10;            ///< density eigenvalue floor (>= -psd_tol)
    double spectral_tol = 1e-10;       ///< eigendecomposition residual bound
    double metric_psd_tol = 1e-9;      ///< metric eigenvalue floor
    double sld_kernel_threshold = 1e-12;
    double sld_residual_tol = 1e-8;    ///< blocked derivative component bound
    double singular_threshold = 1e-10; ///< metric eigenvalue floor for inversion
    double fd_step = 1e-5;             ///< finite-difference step (relative)
    bool fd_richardson = false;        ///< extrapolate central differences
    double integrator_step_tol = 1e-8; ///< half-step error bound per RK4 step
    double rate_pole_tol = 1e-12;      ///< |h| below this is a rate pole
    double boundary_tol = 1e-9;        ///< |n| >= 1 - boundary_tol is pure
};

/// Mutable process-wide configuration.
NumericsConfig& numerics();

} // namespace idflow
