#include "idflow/master_equation.hpp"

#include <cmath>
#include <sstream>

#include "idflow/errors.hpp"

namespace idflow {

Eigen::Index MasterEquation::dim() const {
    if (!channels.empty()) return channels.front().jump_operator.rows();
    if (hamiltonian) return hamiltonian(0.0).rows();
    return 0;
}

ComplexMatrix apply_generator(const MasterEquation& me, double t,
                              const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimMismatch("apply_generator: state is not square");
    }
    ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());

    if (me.hamiltonian) {
        const ComplexMatrix h = me.hamiltonian(t);
        if (h.rows() != m.rows() || h.cols() != m.cols()) {
            throw DimMismatch("apply_generator: Hamiltonian dimension mismatch");
        }
        out += Complex(0.0, -1.0) * (h * m - m * h);
    }

    for (std::size_t i = 0; i < me.channels.size(); ++i) {
        const Channel& ch = me.channels[i];
        const ComplexMatrix& a = ch.jump_operator;
        if (a.rows() != m.rows() || a.cols() != m.cols()) {
            std::ostringstream msg;
            msg << "apply_generator: channel " << i << " dimension mismatch";
            throw DimMismatch(msg.str());
        }
        const double gamma = ch.rate ? ch.rate(t) : 0.0;
        if (!std::isfinite(gamma)) {
            std::ostringstream msg;
            msg << "apply_generator: channel " << i << " rate non-finite at t="
                << t;
            throw PoleOnGrid(msg.str());
        }
        if (gamma == 0.0) continue;
        const ComplexMatrix adag_a = a.adjoint() * a;
        out += gamma * (a * m * a.adjoint() -
                        0.5 * (adag_a * m + m * adag_a));
    }
    return out;
}

ComplexMatrix apply_generator(const MasterEquation& me, double t,
                              const DensityMatrix& rho) {
    return apply_generator(me, t, rho.matrix());
}

} // namespace idflow
