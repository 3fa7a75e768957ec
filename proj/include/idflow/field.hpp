#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idflow/config.hpp"

namespace idflow {

enum class MaskReason : std::uint8_t { None = 0, Boundary, Pole, Undefined };

std::string mask_reason_name(MaskReason reason);

/// A scalar field sampled over one plane of the Bloch ball at one time.
/// values/mask are row-major over (axis1, axis2); masked cells carry NaN
/// values plus a reason code.
struct FieldFrame {
    FieldKind field = FieldKind::Idqs;
    double time = 0.0; // units of 1/lambda
    int channel = -1;  // >= 0 for per-channel gamma frames
    std::array<std::string, 2> axis_labels;
    std::vector<double> axis1, axis2;
    std::vector<double> values;
    std::vector<MaskReason> mask;

    std::size_t index(std::size_t i, std::size_t j) const {
        return i * axis2.size() + j;
    }
};

/// Evaluates one field over the configured grid at time t: closed forms
/// for the dissipative model, the integration pipeline for custom master
/// equations. Cells at the pure boundary (initial or evolved |n| >=
/// 0.999) and at rate poles are masked; per-cell failures become
/// Undefined masks, never an aborted frame. Cell evaluation may run on
/// several threads; the output layout is schedule-independent.
FieldFrame sample_field(const ExperimentConfig& config, FieldKind kind,
                        double t, int threads = 1);

/// As above, for multi-channel custom models: one gamma frame per channel.
std::vector<FieldFrame> sample_gamma_fields(const ExperimentConfig& config,
                                            double t, int threads = 1);

} // namespace idflow
