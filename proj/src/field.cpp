#include "idflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "idflow/dynamics.hpp"
#include "idflow/errors.hpp"
#include "idflow/numerics.hpp"

namespace idflow {

namespace {

constexpr double kBoundaryRadius = 0.999;

int axis_index(const std::string& name) {
    if (name == "n1") return 0;
    if (name == "n2") return 1;
    return 2;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> values(count);
    for (int k = 0; k < count; ++k) {
        values[k] = lo + (hi - lo) * static_cast<double>(k) / (count - 1);
    }
    return values;
}

struct CellResult {
    double value = std::numeric_limits<double>::quiet_NaN();
    MaskReason mask = MaskReason::None;
};

CellResult eval_dissipative_cell(const DissipativeModel& model,
                                 const BlochVector& n0, FieldKind kind,
                                 double t) {
    CellResult cell;
    if (n0.norm() >= kBoundaryRadius) {
        cell.mask = MaskReason::Boundary;
        return cell;
    }
    if (std::abs(model.h(t)) < numerics().rate_pole_tol &&
        kind != FieldKind::Idqs) {
        cell.mask = MaskReason::Pole;
        return cell;
    }
    if (model.motion(n0, t).norm() >= kBoundaryRadius) {
        cell.mask = MaskReason::Boundary;
        return cell;
    }
    try {
        switch (kind) {
            case FieldKind::Idqs: cell.value = model.idqs(n0, t); break;
            case FieldKind::Idf: cell.value = model.idf(n0, t); break;
            case FieldKind::Ridf: cell.value = model.ridf(n0, t); break;
            case FieldKind::Gamma: cell.value = model.gamma(t); break;
        }
    } catch (const Pole&) {
        cell.mask = MaskReason::Pole;
    } catch (const PureBoundary&) {
        cell.mask = MaskReason::Boundary;
    } catch (const Error&) {
        cell.mask = MaskReason::Undefined;
    }
    return cell;
}

CellResult eval_custom_cell(const MasterEquation& me, const BlochVector& n0,
                            FieldKind kind, double t, int steps, int channel) {
    CellResult cell;
    if (n0.norm() >= kBoundaryRadius) {
        cell.mask = MaskReason::Boundary;
        return cell;
    }
    try {
        if (kind == FieldKind::Gamma) {
            // Rates do not depend on the state; no integration needed.
            const Channel& ch = me.channels.at(channel);
            cell.value = ch.rate ? ch.rate(t) : 0.0;
            if (!std::isfinite(cell.value)) {
                cell.value = std::numeric_limits<double>::quiet_NaN();
                cell.mask = MaskReason::Pole;
            }
            return cell;
        }
        if (t == 0.0 && kind == FieldKind::Idqs) {
            cell.value = bloch_idqs(n0);
            return cell;
        }
        ParameterPoint x0(3);
        x0 << n0[0], n0[1], n0[2];
        std::vector<double> grid(steps + 1);
        for (int k = 0; k <= steps; ++k) {
            grid[k] = t * static_cast<double>(k) / steps;
        }
        const std::vector<FlowRecord> records =
            flow_series(me, bloch_family(), x0, grid);
        const FlowRecord& last = records.back();
        if (!last.defined && kind != FieldKind::Gamma) {
            cell.mask = MaskReason::Undefined;
            return cell;
        }
        switch (kind) {
            case FieldKind::Idqs: cell.value = last.idqs; break;
            case FieldKind::Idf: cell.value = last.idf; break;
            case FieldKind::Ridf: cell.value = last.ridf; break;
            case FieldKind::Gamma:
                cell.value = last.gamma.at(channel);
                break;
        }
        if (!std::isfinite(cell.value)) {
            cell.value = std::numeric_limits<double>::quiet_NaN();
            cell.mask = kind == FieldKind::Gamma ? MaskReason::Pole
                                                 : MaskReason::Undefined;
        }
    } catch (const PureBoundary&) {
        cell.mask = MaskReason::Boundary;
    } catch (const PoleOnGrid&) {
        cell.mask = MaskReason::Pole;
    } catch (const Error&) {
        cell.mask = MaskReason::Undefined;
    }
    return cell;
}

FieldFrame sample_impl(const ExperimentConfig& config, FieldKind kind,
                       double t, int threads, int channel) {
    FieldFrame frame;
    frame.field = kind;
    frame.time = t;
    frame.channel = channel;
    frame.axis_labels = config.grid.axes;
    frame.axis1 = linspace(config.grid.ranges[0][0], config.grid.ranges[0][1],
                           config.grid.resolution[0]);
    frame.axis2 = linspace(config.grid.ranges[1][0], config.grid.ranges[1][1],
                           config.grid.resolution[1]);

    const std::size_t n1 = frame.axis1.size();
    const std::size_t n2 = frame.axis2.size();
    frame.values.assign(n1 * n2, std::numeric_limits<double>::quiet_NaN());
    frame.mask.assign(n1 * n2, MaskReason::None);

    const int a1 = axis_index(config.grid.axes[0]);
    const int a2 = axis_index(config.grid.axes[1]);
    const int af = axis_index(config.grid.fixed_axis);

    const bool analytic = config.dissipative();
    DissipativeModel model(1.0, 1.0);
    MasterEquation me;
    int steps = 64;
    if (analytic) {
        const DissipativeSpec& spec = config.dissipative_spec();
        model = DissipativeModel(spec.lambda, spec.W);
    } else {
        me = config.master_equation();
        steps = std::max(
            2, static_cast<int>(std::ceil(config.times.steps * t /
                                          config.times.t_max)));
    }

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const std::size_t i = idx / n2;
            const std::size_t j = idx % n2;
            BlochVector n0 = BlochVector::Zero();
            n0[a1] = frame.axis1[i];
            n0[a2] = frame.axis2[j];
            n0[af] = config.grid.fixed_value;
            const CellResult cell =
                analytic ? eval_dissipative_cell(model, n0, kind, t)
                         : eval_custom_cell(me, n0, kind, t, steps, channel < 0 ? 0 : channel);
            frame.values[idx] = cell.value;
            frame.mask[idx] = cell.mask;
        }
    };

    const std::size_t total = n1 * n2;
    const int n_threads =
        std::max(1, std::min<int>(threads, static_cast<int>(total)));
    if (n_threads == 1) {
        worker(0, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const std::size_t chunk = (total + n_threads - 1) / n_threads;
        for (int w = 0; w < n_threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }
    return frame;
}

} // namespace

std::string mask_reason_name(MaskReason reason) {
    switch (reason) {
        case MaskReason::None: return "";
        case MaskReason::Boundary: return "boundary";
        case MaskReason::Pole: return "pole";
        case MaskReason::Undefined: return "undefined";
    }
    return "";
}

FieldFrame sample_field(const ExperimentConfig& config, FieldKind kind,
                        double t, int threads) {
    return sample_impl(config, kind, t, threads, -1);
}

std::vector<FieldFrame> sample_gamma_fields(const ExperimentConfig& config,
                                            double t, int threads) {
    std::vector<FieldFrame> frames;
    if (config.dissipative()) {
        frames.push_back(sample_impl(config, FieldKind::Gamma, t, threads, -1));
        return frames;
    }
    const std::size_t n_channels = config.custom_spec().channels.size();
    for (std::size_t c = 0; c < n_channels; ++c) {
        frames.push_back(sample_impl(config, FieldKind::Gamma, t, threads,
                                     static_cast<int>(c)));
    }
    return frames;
}

} // namespace idflow
