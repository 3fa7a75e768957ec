#pragma once

#include <string>
#include <vector>

#include "idflow/dynamics.hpp"
#include "idflow/master_equation.hpp"

namespace idflow {

enum class WitnessKind { IdfPositive, RateNegative };

/// One maximal interval of uniform sign. Endpoints are located by linear
/// interpolation between grid samples; pole-flagged samples split
/// intervals. extreme_* track the witnessed quantity, idqs_min_* the
/// smallest IDQS seen inside the interval (NaN when unavailable).
struct Interval {
    double t_start = 0.0;
    double t_end = 0.0;
    int sign = 0; // -1, 0, +1
    double extreme_t = std::numeric_limits<double>::quiet_NaN();
    double extreme_value = std::numeric_limits<double>::quiet_NaN();
    double idqs_min_t = std::numeric_limits<double>::quiet_NaN();
    double idqs_min = std::numeric_limits<double>::quiet_NaN();
};

struct IntervalReport {
    WitnessKind kind = WitnessKind::IdfPositive;
    int channel = -1; // for rate reports
    std::vector<Interval> intervals;
};

/// Maximal intervals with idf > threshold. Undefined (pole-flagged)
/// records split intervals. Throws EmptySeries.
IntervalReport detect_backflow(const std::vector<FlowRecord>& records,
                               double threshold);

/// Per-channel sign partition of gamma_i over the grid. Sign boundaries
/// are interpolated; declared pole times and non-finite samples split
/// intervals exactly.
std::vector<IntervalReport> rate_sign_intervals(const MasterEquation& me,
                                                const std::vector<double>& t_grid);

struct WitnessCounterexample {
    Interval idf_interval;
    std::string note;
};

struct WitnessSummary {
    std::size_t n_channels = 0;
    bool single_channel_containment = true;
    std::vector<WitnessCounterexample> counterexamples;
};

/// For single-channel systems, checks that every idf-positive interval is
/// contained in a gamma-negative interval up to one grid step; violations
/// are reported, not thrown. Multi-channel systems may legitimately fail
/// containment (sub-flows can cancel) and are reported the same way.
WitnessSummary witness_agreement(const IntervalReport& idf_report,
                                 const std::vector<IntervalReport>& rate_reports,
                                 double grid_step);

/// Time-integral of the positive part of idf over the series. Not part of
/// the flow formalism itself; exposed as an optional summary statistic.
double positive_idf_integral(const std::vector<FlowRecord>& records);

} // namespace idflow
