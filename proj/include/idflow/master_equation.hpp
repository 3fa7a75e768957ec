#pragma once

#include <functional>
#include <vector>

#include "idflow/density.hpp"
#include "idflow/matrix.hpp"

namespace idflow {

using RateFn = std::function<double(double)>;
using HamiltonianFn = std::function<ComplexMatrix(double)>;

/// One dissipation channel: a fixed (parameter-independent) jump operator
/// and a time-dependent decay rate. Rates may diverge at declared pole
/// times; integration grids must stay clear of those.
struct Channel {
    ComplexMatrix jump_operator;
    RateFn rate;
    std::vector<double> pole_times;
};

struct MasterEquation {
    HamiltonianFn hamiltonian; // null means H = 0
    std::vector<Channel> channels;

    Eigen::Index dim() const;
};

/// Generator action on an arbitrary operator:
///   -i[H(t), m] + sum_i gamma_i(t) (A_i m A_i^+ - 1/2 {A_i^+ A_i, m}).
/// Linear in m, so it applies equally to states and their parameter
/// derivatives. Throws DimMismatch; PoleOnGrid if a rate is non-finite
/// at t.
ComplexMatrix apply_generator(const MasterEquation& me, double t,
                              const ComplexMatrix& m);

ComplexMatrix apply_generator(const MasterEquation& me, double t,
                              const DensityMatrix& rho);

} // namespace idflow
