#pragma once

#include <string>
#include <vector>

#include "idflow/dynamics.hpp"
#include "idflow/field.hpp"
#include "idflow/witness.hpp"

namespace idflow {

/// Shortest round-trip decimal representation of a double ("." separator,
/// locale-independent).
std::string format_double(double x);

/// One flow series: an initial point and its records.
struct SeriesOutput {
    BlochVector point;
    std::vector<FlowRecord> records;
};

/// Point metric dump: the metric, its eigenvalues, and the IDQS.
struct MetricOutput {
    BlochVector point;
    RealMatrix g;
    RealVector eigenvalues;
    double idqs = 0.0;
};

/// Everything one run produced; serializes to a single JSON document.
struct RunOutput {
    ExperimentConfig config;
    std::vector<MetricOutput> metrics;
    std::vector<FieldFrame> frames;
    std::vector<SeriesOutput> series;
    std::vector<IntervalReport> reports;
    std::vector<WitnessSummary> summaries;
};

/// CSV with header axis1,axis2,value,mask; LF endings; masked cells have
/// an empty value and the mask reason. Byte-stable across runs.
void emit_csv(const FieldFrame& frame, const std::string& path);
std::string frame_to_csv(const FieldFrame& frame);

/// CSV for a flow series: t,idqs,idf,ridf,sub_idf_i...,gamma_i...,defined.
void emit_series_csv(const SeriesOutput& series, const std::string& path);
std::string series_to_csv(const SeriesOutput& series);

/// Full-run JSON (config echo, frames, per-point records, reports).
void emit_json(const RunOutput& run, const std::string& path);
std::string run_to_json(const RunOutput& run);

/// Inverse of run_to_json; values round-trip exactly.
RunOutput parse_run(const std::string& text);

/// Static SVG heatmap: one rect per cell, sequential palette for idqs,
/// symmetric diverging palette centered at zero for signed fields, hatched
/// masked cells, and a color bar with min/0/max ticks.
void render_svg(const FieldFrame& frame, const std::string& path);
std::string frame_to_svg(const FieldFrame& frame);

} // namespace idflow
