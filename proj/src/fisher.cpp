#include "idflow/fisher.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "idflow/errors.hpp"
#include "idflow/numerics.hpp"

namespace idflow {

ComplexMatrix sld(const DensityMatrix& rho, const ComplexMatrix& drho,
                  double kernel_threshold) {
    const Eigen::Index dim = rho.dim();
    if (drho.rows() != dim || drho.cols() != dim) {
        throw DimMismatch("sld: derivative dimension mismatch");
    }
    const double defect = hermiticity_defect(drho);
    if (defect > numerics().spectral_tol) {
        throw NotHermitian("sld: derivative Hermiticity defect " +
                           std::to_string(defect));
    }

    const Spectrum spec = hermitian_eig(rho.matrix());
    const ComplexMatrix& v = spec.eigenvectors;
    const ComplexMatrix d_eig = v.adjoint() * drho * v;

    ComplexMatrix l_eig = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            const double psum = spec.eigenvalues[j] + spec.eigenvalues[k];
            if (psum > kernel_threshold) {
                l_eig(j, k) = 2.0 * d_eig(j, k) / psum;
            } else if (std::abs(d_eig(j, k)) > numerics().sld_residual_tol) {
                std::ostringstream msg;
                msg << "sld: derivative component (" << j << "," << k
                    << ") = " << std::abs(d_eig(j, k))
                    << " lies in the kernel of rho (p_j + p_k = " << psum
                    << "); the derivative leaves the support";
                throw UnsupportedDerivative(msg.str());
            }
        }
    }

    ComplexMatrix l = v * l_eig * v.adjoint();
    return 0.5 * (l + l.adjoint());
}

SLDSet sld_set(const DensityMatrix& rho,
               const std::vector<ComplexMatrix>& derivatives,
               double kernel_threshold) {
    SLDSet set;
    set.kernel_threshold = kernel_threshold;
    set.operators.reserve(derivatives.size());
    for (const ComplexMatrix& d : derivatives) {
        set.operators.push_back(sld(rho, d, kernel_threshold));
    }
    return set;
}

namespace {

double real_trace_checked(const ComplexMatrix& m, const char* where) {
    const Complex tr = m.trace();
    if (std::abs(tr.imag()) > 1e-10) {
        std::ostringstream msg;
        msg << where << ": imaginary trace residue " << tr.imag();
        throw Error(msg.str());
    }
    return tr.real();
}

} // namespace

FisherMetric qfm(const DensityMatrix& rho, const SLDSet& slds,
                 const ParameterPoint& point) {
    const int d = static_cast<int>(slds.operators.size());
    RealMatrix g(d, d);
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = mu; nu < d; ++nu) {
            const ComplexMatrix acomm =
                anticommutator(slds.operators[mu], slds.operators[nu]);
            const double value =
                0.125 * real_trace_checked(acomm * rho.matrix(), "qfm");
            g(mu, nu) = value;
            g(nu, mu) = value;
        }
    }
    return FisherMetric{std::move(g), point};
}

FisherMetric qfm(const DensityMatrix& rho, const SLDSet& slds) {
    return qfm(rho, slds, ParameterPoint());
}

FisherMetric qfm_at(const StateFamily& family, const ParameterPoint& x0) {
    const DensityMatrix rho = family.evaluate(x0);
    const std::vector<ComplexMatrix> derivs = family_derivatives(family, x0);
    const SLDSet slds = sld_set(rho, derivs, numerics().sld_kernel_threshold);
    return qfm(rho, slds, x0);
}

double idqs(const FisherMetric& metric) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(metric.g);
    if (solver.info() != Eigen::Success) {
        throw Error("idqs: eigensolver failed");
    }
    double log_det = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        double ev = solver.eigenvalues()[k];
        if (ev < -numerics().metric_psd_tol) {
            std::ostringstream msg;
            msg << "idqs: metric eigenvalue " << ev << " below -"
                << numerics().metric_psd_tol;
            throw NegativeDeterminant(msg.str());
        }
        if (ev <= 0.0) return 0.0;
        log_det += std::log(ev);
    }
    return std::exp(0.5 * log_det);
}

RealMatrix metric_inverse(const FisherMetric& metric,
                          double singular_threshold) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(metric.g);
    if (solver.info() != Eigen::Success) {
        throw Error("metric_inverse: eigensolver failed");
    }
    const RealVector& evs = solver.eigenvalues();
    if (evs.minCoeff() <= singular_threshold) {
        std::ostringstream msg;
        msg << "metric_inverse: eigenvalue " << evs.minCoeff()
            << " at or below singular threshold " << singular_threshold;
        throw SingularMetric(msg.str());
    }
    return solver.eigenvectors() * evs.cwiseInverse().asDiagonal() *
           solver.eigenvectors().transpose();
}

RealMatrix metric_inverse(const FisherMetric& metric) {
    return metric_inverse(metric, numerics().singular_threshold);
}

RealMatrix metric_time_derivative(
    const ComplexMatrix& drho_dt, const SLDSet& slds,
    const std::vector<ComplexMatrix>& ddrho_dt_dparam) {
    const int d = static_cast<int>(slds.operators.size());
    if (ddrho_dt_dparam.size() != static_cast<std::size_t>(d)) {
        throw DimMismatch(
            "metric_time_derivative: directional derivative count mismatch");
    }
    RealMatrix m(d, d);
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = mu; nu < d; ++nu) {
            const ComplexMatrix& l_mu = slds.operators[mu];
            const ComplexMatrix& l_nu = slds.operators[nu];
            const ComplexMatrix term =
                l_nu * (2.0 * ddrho_dt_dparam[mu] - l_mu * drho_dt) +
                l_mu * (2.0 * ddrho_dt_dparam[nu] - l_nu * drho_dt);
            const double value =
                0.5 * real_trace_checked(term, "metric_time_derivative");
            m(mu, nu) = value;
            m(nu, mu) = value;
        }
    }
    return m;
}

double ridf(const DensityMatrix& rho, const ComplexMatrix& drho_dt,
            const SLDSet& slds,
            const std::vector<ComplexMatrix>& ddrho_dt_dparam,
            const FisherMetric& metric) {
    if (drho_dt.rows() != rho.dim() || drho_dt.cols() != rho.dim()) {
        throw DimMismatch("ridf: drho_dt dimension mismatch");
    }
    const double defect = hermiticity_defect(drho_dt);
    if (defect > numerics().spectral_tol) {
        throw NotHermitian("ridf: drho_dt Hermiticity defect " +
                           std::to_string(defect));
    }
    const RealMatrix inv = metric_inverse(metric);
    const RealMatrix dg =
        metric_time_derivative(drho_dt, slds, ddrho_dt_dparam);
    return 0.5 * (inv * dg).trace();
}

double idf(double ridf_value, double idqs_value) {
    return ridf_value * idqs_value;
}

std::vector<double> qfif_single(const std::vector<FisherMetric>& metric_series,
                                const RealVector& curve_tangent, double dt) {
    const std::size_t n = metric_series.size();
    if (n < 3) {
        throw GridTooShort("qfif_single: need at least 3 samples, got " +
                           std::to_string(n));
    }
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) {
        f[k] = 4.0 * curve_tangent.dot(metric_series[k].g * curve_tangent);
    }
    std::vector<double> df(n);
    df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        df[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt);
    }
    df[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    return df;
}

} // namespace idflow
