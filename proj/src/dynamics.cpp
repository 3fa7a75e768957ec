#include "idflow/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "idflow/errors.hpp"
#include "idflow/numerics.hpp"

namespace idflow {

namespace {

using MatrixList = std::vector<ComplexMatrix>;

MatrixList apply_generator_all(const MasterEquation& me, double t,
                               const MatrixList& ms) {
    MatrixList out;
    out.reserve(ms.size());
    for (const ComplexMatrix& m : ms) {
        out.push_back(apply_generator(me, t, m));
    }
    return out;
}

// One classical RK4 step on the whole co-integrated block.
MatrixList rk4_step(const MasterEquation& me, double t, double dt,
                    const MatrixList& ms) {
    const MatrixList k1 = apply_generator_all(me, t, ms);
    MatrixList tmp(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) tmp[i] = ms[i] + 0.5 * dt * k1[i];
    const MatrixList k2 = apply_generator_all(me, t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < ms.size(); ++i) tmp[i] = ms[i] + 0.5 * dt * k2[i];
    const MatrixList k3 = apply_generator_all(me, t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < ms.size(); ++i) tmp[i] = ms[i] + dt * k3[i];
    const MatrixList k4 = apply_generator_all(me, t + dt, tmp);

    MatrixList out(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        out[i] = ms[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

void hermitize_all(MatrixList& ms) {
    for (ComplexMatrix& m : ms) m = 0.5 * (m + m.adjoint()).eval();
}

// Advance one grid interval with two half steps; the distance to the
// single full step is the error estimate.
MatrixList advance_interval(const MasterEquation& me, double t0, double t1,
                            const MatrixList& ms) {
    const double dt = t1 - t0;
    const MatrixList full = rk4_step(me, t0, dt, ms);
    MatrixList halves = rk4_step(me, t0, 0.5 * dt, ms);
    halves = rk4_step(me, t0 + 0.5 * dt, 0.5 * dt, halves);

    double err = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        err = std::max(err, (full[i] - halves[i]).cwiseAbs().maxCoeff());
    }
    if (err > numerics().integrator_step_tol) {
        std::ostringstream msg;
        msg << "integrate: half-step error " << err << " at t=" << t0
            << " exceeds " << numerics().integrator_step_tol
            << "; refine the grid";
        throw StepTooLarge(msg.str());
    }
    hermitize_all(halves);
    return halves;
}

void check_grid(const std::vector<double>& t_grid) {
    if (t_grid.size() < 1) {
        throw GridTooShort("integrate: empty time grid");
    }
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        if (!(t_grid[k] > t_grid[k - 1])) {
            throw RangeError("integrate: time grid not strictly ascending");
        }
    }
}

void check_rate_poles(const MasterEquation& me,
                      const std::vector<double>& t_grid) {
    for (const Channel& ch : me.channels) {
        if (!ch.rate) continue;
        for (double t : t_grid) {
            if (!std::isfinite(ch.rate(t))) {
                std::ostringstream msg;
                msg << "integrate: rate non-finite at grid time t=" << t;
                throw PoleOnGrid(msg.str());
            }
        }
    }
}

} // namespace

Trajectory integrate(const MasterEquation& me, const DensityMatrix& rho0,
                     const std::vector<double>& t_grid) {
    check_grid(t_grid);
    check_rate_poles(me, t_grid);

    const NumericsConfig& cfg = numerics();
    const DensityTolerances traj_tol{cfg.algebraic_tol, 1e-9, 1e-7};

    Trajectory traj;
    traj.times = t_grid;
    traj.states.reserve(t_grid.size());
    traj.states.push_back(rho0);

    MatrixList block{rho0.matrix()};
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        block = advance_interval(me, t_grid[k - 1], t_grid[k], block);
        traj.states.push_back(validate_density(block[0], traj_tol));
    }
    return traj;
}

RealMatrix channel_metric_derivative(const ComplexMatrix& A,
                                     const DensityMatrix& rho,
                                     const SLDSet& slds) {
    const int d = static_cast<int>(slds.operators.size());
    if (A.rows() != rho.dim() || A.cols() != rho.dim()) {
        throw DimMismatch("channel_metric_derivative: jump operator mismatch");
    }
    std::vector<ComplexMatrix> comm(d);
    for (int mu = 0; mu < d; ++mu) {
        comm[mu] = A * slds.operators[mu] - slds.operators[mu] * A;
    }
    RealMatrix m(d, d);
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = mu; nu < d; ++nu) {
            const ComplexMatrix term = comm[nu].adjoint() * comm[mu] +
                                       comm[mu].adjoint() * comm[nu];
            const double value = -0.5 * (term * rho.matrix()).trace().real();
            m(mu, nu) = value;
            m(nu, mu) = value;
        }
    }
    return m;
}

double sub_idf(double gamma, const RealMatrix& channel_deriv,
               const FisherMetric& metric, double idqs_value) {
    const RealMatrix inv = metric_inverse(metric);
    return 0.5 * gamma * (inv * channel_deriv).trace() * idqs_value;
}

std::vector<FlowRecord> flow_series(const MasterEquation& me,
                                    const StateFamily& family,
                                    const ParameterPoint& x0,
                                    const std::vector<double>& t_grid) {
    check_grid(t_grid);
    check_rate_poles(me, t_grid);

    const NumericsConfig& cfg = numerics();
    const DensityTolerances traj_tol{cfg.algebraic_tol, 1e-9, 1e-7};

    const DensityMatrix rho0 = family.evaluate(x0);
    std::vector<ComplexMatrix> derivs0 = family_derivatives(family, x0);
    const int d = family.dim_param;

    MatrixList block;
    block.reserve(1 + d);
    block.push_back(rho0.matrix());
    for (ComplexMatrix& dv : derivs0) block.push_back(std::move(dv));

    std::vector<FlowRecord> records;
    records.reserve(t_grid.size());

    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const double t = t_grid[k];
        if (k > 0) {
            block = advance_interval(me, t_grid[k - 1], t, block);
        }

        FlowRecord rec;
        rec.t = t;
        rec.gamma.reserve(me.channels.size());
        for (const Channel& ch : me.channels) {
            rec.gamma.push_back(ch.rate ? ch.rate(t) : 0.0);
        }

        try {
            const DensityMatrix rho = validate_density(block[0], traj_tol);
            const std::vector<ComplexMatrix> derivs(block.begin() + 1,
                                                    block.end());
            const SLDSet slds =
                sld_set(rho, derivs, cfg.sld_kernel_threshold);
            const FisherMetric metric = qfm(rho, slds, x0);
            rec.idqs = idqs(metric);

            const ComplexMatrix drho_dt = apply_generator(me, t, rho.matrix());
            std::vector<ComplexMatrix> ddrho(derivs.size());
            for (std::size_t mu = 0; mu < derivs.size(); ++mu) {
                ddrho[mu] = apply_generator(me, t, derivs[mu]);
            }
            rec.ridf = ridf(rho, drho_dt, slds, ddrho, metric);
            rec.idf = idf(rec.ridf, rec.idqs);

            const RealMatrix inv = metric_inverse(metric);
            rec.sub_idf.reserve(me.channels.size());
            for (std::size_t i = 0; i < me.channels.size(); ++i) {
                const RealMatrix cd = channel_metric_derivative(
                    me.channels[i].jump_operator, rho, slds);
                rec.sub_idf.push_back(0.5 * rec.gamma[i] *
                                      (inv * cd).trace() * rec.idqs);
            }
            rec.defined = true;
        } catch (const SingularMetric& e) {
            rec.defined = false;
            rec.reason = e.what();
        } catch (const UnsupportedDerivative& e) {
            rec.defined = false;
            rec.reason = e.what();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace idflow
