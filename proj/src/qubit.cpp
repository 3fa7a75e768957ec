#include "idflow/qubit.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "idflow/errors.hpp"
#include "idflow/numerics.hpp"

namespace idflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexMatrix pauli_component(int mu) {
    switch (mu) {
        case 0: return pauli::sigma_x();
        case 1: return pauli::sigma_y();
        default: return pauli::sigma_z();
    }
}

} // namespace

DensityMatrix bloch_state(const BlochVector& n) {
    const double r2 = n.squaredNorm();
    if (r2 > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "bloch_state: |n|^2 = " << r2 << " outside the unit ball";
        throw OutsideBall(msg.str());
    }
    ComplexMatrix m(2, 2);
    m << Complex(0.5 * (1.0 + n[2]), 0.0), Complex(0.5 * n[0], -0.5 * n[1]),
        Complex(0.5 * n[0], 0.5 * n[1]), Complex(0.5 * (1.0 - n[2]), 0.0);
    // Clip the trailing rounding when |n| = 1 exactly.
    const NumericsConfig& cfg = numerics();
    return validate_density(
        m, DensityTolerances{cfg.algebraic_tol, cfg.trace_tol,
                             std::max(cfg.psd_tol, 2e-12)});
}

double bloch_idqs(const BlochVector& n) {
    const double r = n.norm();
    if (r >= 1.0 - numerics().boundary_tol) {
        std::ostringstream msg;
        msg << "bloch_idqs: |n| = " << r << " at the pure-state boundary";
        throw PureBoundary(msg.str());
    }
    return 1.0 / (8.0 * std::sqrt(1.0 - r * r));
}

StateFamily bloch_family() {
    StateFamily family;
    family.dim_param = 3;
    family.evaluate = [](const ParameterPoint& x) {
        return bloch_state(BlochVector(x[0], x[1], x[2]));
    };
    family.analytic_derivative = [](const ParameterPoint&, int mu) {
        return ComplexMatrix(0.5 * pauli_component(mu));
    };
    return family;
}

RealMatrix bloch_spherical_jacobian(const ParameterPoint& rtp) {
    const double r = rtp[0], th = rtp[1], ph = rtp[2];
    const double st = std::sin(th), ct = std::cos(th);
    const double sp = std::sin(ph), cp = std::cos(ph);
    RealMatrix j(3, 3);
    j << st * cp, r * ct * cp, -r * st * sp,
         st * sp, r * ct * sp,  r * st * cp,
         ct,     -r * st,       0.0;
    return j;
}

StateFamily bloch_family_spherical() {
    StateFamily family;
    family.dim_param = 3;
    auto to_cartesian = [](const ParameterPoint& y) {
        return BlochVector(y[0] * std::sin(y[1]) * std::cos(y[2]),
                           y[0] * std::sin(y[1]) * std::sin(y[2]),
                           y[0] * std::cos(y[1]));
    };
    family.evaluate = [to_cartesian](const ParameterPoint& y) {
        return bloch_state(to_cartesian(y));
    };
    family.analytic_derivative = [](const ParameterPoint& y, int mu) {
        const RealMatrix j = bloch_spherical_jacobian(y);
        ComplexMatrix d = ComplexMatrix::Zero(2, 2);
        for (int nu = 0; nu < 3; ++nu) {
            d += j(nu, mu) * 0.5 * pauli_component(nu);
        }
        return d;
    };
    return family;
}

DissipativeModel::DissipativeModel(double lambda, double W)
    : lambda_(lambda), W_(W) {
    if (!(lambda > 0.0)) {
        throw RangeError("DissipativeModel: lambda must be positive");
    }
    if (W < 0.0) {
        throw RangeError("DissipativeModel: W must be non-negative");
    }
    wbar_ = W / lambda;
    d_ = std::sqrt(std::abs(1.0 - 4.0 * wbar_ * wbar_));
    weak_ = wbar_ < 0.5;
    degenerate_ = d_ < 1e-8;
}

double DissipativeModel::h(double t) const {
    if (degenerate_) {
        return std::exp(-0.5 * t) * (1.0 + 0.5 * t);
    }
    const double arg = 0.5 * d_ * t;
    if (weak_) {
        return std::exp(-0.5 * t) * (std::cosh(arg) + std::sinh(arg) / d_);
    }
    return std::exp(-0.5 * t) * (std::cos(arg) + std::sin(arg) / d_);
}

double DissipativeModel::h_dot(double t) const {
    const double amp = 2.0 * wbar_ * wbar_;
    if (degenerate_) {
        return -0.25 * t * std::exp(-0.5 * t);
    }
    const double arg = 0.5 * d_ * t;
    if (weak_) {
        return -(amp / d_) * std::exp(-0.5 * t) * std::sinh(arg);
    }
    return -(amp / d_) * std::exp(-0.5 * t) * std::sin(arg);
}

double DissipativeModel::gamma(double t) const {
    const double ht = h(t);
    if (std::abs(ht) < numerics().rate_pole_tol) {
        std::ostringstream msg;
        msg << "gamma: h(" << t << ") = " << ht << " is a rate pole";
        throw Pole(msg.str());
    }
    return -2.0 * h_dot(t) / ht;
}

std::vector<double> DissipativeModel::h_zeros(double t_max) const {
    std::vector<double> zeros;
    if (weak_ || degenerate_) return zeros; // h > 0 for all finite t
    // cos(d t/2) + sin(d t/2)/d = 0  <=>  t = (2/d)(k pi - atan(d)).
    const double offset = std::atan(d_);
    for (int k = 1;; ++k) {
        const double t = (2.0 / d_) * (k * kPi - offset);
        if (t > t_max) break;
        zeros.push_back(t);
    }
    return zeros;
}

BlochVector DissipativeModel::motion(const BlochVector& n0, double t) const {
    const double ht = h(t);
    return BlochVector(ht * n0[0], ht * n0[1],
                       ht * ht * (1.0 + n0[2]) - 1.0);
}

double DissipativeModel::idqs(const BlochVector& n0, double t) const {
    const double ht = h(t);
    const BlochVector n = motion(n0, t);
    const double gap = 1.0 - n.squaredNorm();
    if (gap <= 2.0 * numerics().boundary_tol) {
        std::ostringstream msg;
        msg << "dissipative idqs: |n(t)| at the pure boundary (1 - |n|^2 = "
            << gap << ")";
        throw PureBoundary(msg.str());
    }
    const double h2 = ht * ht;
    return h2 * h2 / (8.0 * std::sqrt(gap));
}

// [3 + (1 + n^3)^2 / (1 - |n|^2)] evaluated through the cancellation-free
// form (1 + n^3) = h^2 u and (1 - |n|^2) = h^2 (2u - p - h^2 u^2) with
// u = 1 + n0^3, p = (n0^1)^2 + (n0^2)^2. The stationary point u = p = 0
// takes the limit value 3.
double DissipativeModel::bracket_factor(const BlochVector& n0,
                                        double t) const {
    const double u = 1.0 + n0[2];
    const double p = n0[0] * n0[0] + n0[1] * n0[1];
    if (u <= 1e-15 && p <= 1e-15) {
        return 3.0;
    }
    const double h2 = h(t) * h(t);
    const double denom = 2.0 * u - p - h2 * u * u; // (1 - |n|^2) / h^2
    if (denom <= 2.0 * numerics().boundary_tol) {
        std::ostringstream msg;
        msg << "dissipative ridf: |n(t)| at the pure boundary";
        throw PureBoundary(msg.str());
    }
    return 3.0 + h2 * u * u / denom;
}

double DissipativeModel::ridf(const BlochVector& n0, double t) const {
    return -0.5 * gamma(t) * bracket_factor(n0, t);
}

double DissipativeModel::idf(const BlochVector& n0, double t) const {
    return ridf(n0, t) * idqs(n0, t);
}

std::pair<double, double> DissipativeModel::state_space_split(
    const BlochVector& n0, double t) const {
    const double ht = h(t);
    if (std::abs(ht) < numerics().rate_pole_tol) {
        throw Pole("state_space_split: h(t) = 0");
    }
    const double jacobian_term = 4.0 * h_dot(t) / ht; // = -2 gamma
    // Orbit term (n . n_dot) / (1 - |n|^2) in the same cancellation-free
    // variables as bracket_factor.
    const double u = 1.0 + n0[2];
    const double p = n0[0] * n0[0] + n0[1] * n0[1];
    double orbit_term;
    if (u <= 1e-15 && p <= 1e-15) {
        orbit_term = -h_dot(t) / ht; // stationary point limit, = gamma/2
    } else {
        const double h2 = ht * ht;
        const double denom = 2.0 * u - p - h2 * u * u;
        if (denom <= 2.0 * numerics().boundary_tol) {
            throw PureBoundary("state_space_split: |n(t)| at the pure boundary");
        }
        const double n3 = h2 * u - 1.0;
        orbit_term = h_dot(t) * (p + 2.0 * n3 * u) / (ht * denom);
    }
    return {orbit_term, jacobian_term};
}

MasterEquation DissipativeModel::master_equation(double t_max) const {
    // Jump operator lowering toward the stationary pole n3 = -1.
    ComplexMatrix jump(2, 2);
    jump << 0, 0, 1, 0;

    Channel ch;
    ch.jump_operator = std::move(jump);
    DissipativeModel model = *this;
    ch.rate = [model](double t) {
        try {
            return model.gamma(t);
        } catch (const Pole&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    ch.pole_times = h_zeros(t_max);

    MasterEquation me;
    me.channels.push_back(std::move(ch));
    return me;
}

} // namespace idflow
