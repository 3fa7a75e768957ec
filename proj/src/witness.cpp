#include "idflow/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "idflow/errors.hpp"

namespace idflow {

namespace {

double interpolate_crossing(double t0, double v0, double t1, double v1,
                            double level) {
    const double dv = v1 - v0;
    if (dv == 0.0) return t0;
    const double s = (level - v0) / dv;
    return t0 + s * (t1 - t0);
}

void close_interval(Interval& iv, double t_end) {
    iv.t_end = t_end;
}

} // namespace

IntervalReport detect_backflow(const std::vector<FlowRecord>& records,
                               double threshold) {
    if (records.empty()) {
        throw EmptySeries("detect_backflow: empty record series");
    }
    if (threshold < 0.0) {
        throw RangeError("detect_backflow: threshold must be >= 0");
    }

    IntervalReport report;
    report.kind = WitnessKind::IdfPositive;

    bool open = false;
    Interval current;
    auto finish = [&](double t_end) {
        close_interval(current, t_end);
        report.intervals.push_back(current);
        open = false;
    };

    for (std::size_t k = 0; k < records.size(); ++k) {
        const FlowRecord& rec = records[k];
        const bool usable = rec.defined && std::isfinite(rec.idf);
        const bool above = usable && rec.idf > threshold;

        if (above && !open) {
            current = Interval{};
            current.sign = +1;
            current.t_start = rec.t;
            if (k > 0 && records[k - 1].defined &&
                std::isfinite(records[k - 1].idf)) {
                current.t_start =
                    interpolate_crossing(records[k - 1].t, records[k - 1].idf,
                                         rec.t, rec.idf, threshold);
            }
            current.extreme_t = rec.t;
            current.extreme_value = rec.idf;
            current.idqs_min_t = rec.t;
            current.idqs_min = rec.idqs;
            open = true;
        } else if (open && above) {
            if (rec.idf > current.extreme_value) {
                current.extreme_value = rec.idf;
                current.extreme_t = rec.t;
            }
            if (std::isfinite(rec.idqs) && !(rec.idqs >= current.idqs_min)) {
                current.idqs_min = rec.idqs;
                current.idqs_min_t = rec.t;
            }
        } else if (open && !above) {
            // Pole-flagged records split intervals at the last usable time.
            double t_end = rec.t;
            if (usable) {
                t_end = interpolate_crossing(records[k - 1].t,
                                             records[k - 1].idf, rec.t,
                                             rec.idf, threshold);
            } else if (k > 0) {
                t_end = records[k - 1].t;
            }
            finish(t_end);
        }
    }
    if (open) finish(records.back().t);
    return report;
}

namespace {

int rate_sign(double value, double zero_tol) {
    if (!std::isfinite(value)) return 2; // pole marker
    if (value > zero_tol) return +1;
    if (value < -zero_tol) return -1;
    return 0;
}

} // namespace

std::vector<IntervalReport> rate_sign_intervals(
    const MasterEquation& me, const std::vector<double>& t_grid) {
    if (t_grid.empty()) {
        throw EmptySeries("rate_sign_intervals: empty time grid");
    }
    constexpr double kZeroTol = 1e-12;

    std::vector<IntervalReport> reports;
    reports.reserve(me.channels.size());

    for (std::size_t c = 0; c < me.channels.size(); ++c) {
        const Channel& ch = me.channels[c];
        IntervalReport report;
        report.kind = WitnessKind::RateNegative;
        report.channel = static_cast<int>(c);

        std::vector<double> values(t_grid.size());
        std::vector<int> signs(t_grid.size());
        for (std::size_t k = 0; k < t_grid.size(); ++k) {
            values[k] = ch.rate ? ch.rate(t_grid[k]) : 0.0;
            signs[k] = rate_sign(values[k], kZeroTol);
        }

        // Single zero samples between runs of unlike sign are crossings,
        // not intervals; absorb them into the following run.
        for (std::size_t k = 1; k + 1 < t_grid.size(); ++k) {
            if (signs[k] == 0 && signs[k - 1] != 0 && signs[k + 1] != 0) {
                signs[k] = signs[k + 1];
            }
        }

        std::size_t run_start = 0;
        while (run_start < t_grid.size()) {
            // Skip pole samples entirely; they split intervals.
            if (signs[run_start] == 2) {
                ++run_start;
                continue;
            }
            std::size_t run_end = run_start;
            while (run_end + 1 < t_grid.size() &&
                   signs[run_end + 1] == signs[run_start]) {
                ++run_end;
            }

            Interval iv;
            iv.sign = signs[run_start];
            iv.t_start = t_grid[run_start];
            iv.t_end = t_grid[run_end];

            // Interpolate the boundary where the sign flips through zero.
            if (run_start > 0 && signs[run_start - 1] != 2 &&
                std::isfinite(values[run_start - 1])) {
                iv.t_start = interpolate_crossing(
                    t_grid[run_start - 1], values[run_start - 1],
                    t_grid[run_start], values[run_start], 0.0);
            }
            if (run_end + 1 < t_grid.size() && signs[run_end + 1] != 2 &&
                std::isfinite(values[run_end + 1])) {
                iv.t_end = interpolate_crossing(
                    t_grid[run_end], values[run_end], t_grid[run_end + 1],
                    values[run_end + 1], 0.0);
            }

            std::size_t extreme = run_start;
            for (std::size_t k = run_start; k <= run_end; ++k) {
                if (std::abs(values[k]) > std::abs(values[extreme])) extreme = k;
            }
            iv.extreme_t = t_grid[extreme];
            iv.extreme_value = values[extreme];

            report.intervals.push_back(iv);
            run_start = run_end + 1;
        }

        // Split at declared pole times that fall inside an interval.
        for (double pole : ch.pole_times) {
            std::vector<Interval> split;
            for (const Interval& iv : report.intervals) {
                if (pole > iv.t_start && pole < iv.t_end) {
                    Interval left = iv;
                    Interval right = iv;
                    left.t_end = pole;
                    right.t_start = pole;
                    split.push_back(left);
                    split.push_back(right);
                } else {
                    split.push_back(iv);
                }
            }
            report.intervals = std::move(split);
        }

        reports.push_back(std::move(report));
    }
    return reports;
}

WitnessSummary witness_agreement(const IntervalReport& idf_report,
                                 const std::vector<IntervalReport>& rate_reports,
                                 double grid_step) {
    WitnessSummary summary;
    summary.n_channels = rate_reports.size();

    std::vector<Interval> negative;
    for (const IntervalReport& report : rate_reports) {
        for (const Interval& iv : report.intervals) {
            if (iv.sign < 0) negative.push_back(iv);
        }
    }

    for (const Interval& flow : idf_report.intervals) {
        const bool contained =
            std::any_of(negative.begin(), negative.end(), [&](const Interval& g) {
                return flow.t_start >= g.t_start - grid_step &&
                       flow.t_end <= g.t_end + grid_step;
            });
        if (!contained) {
            std::ostringstream note;
            note << "idf-positive interval [" << flow.t_start << ", "
                 << flow.t_end
                 << "] not contained in any gamma-negative interval";
            summary.counterexamples.push_back({flow, note.str()});
        }
    }
    if (summary.n_channels == 1) {
        summary.single_channel_containment = summary.counterexamples.empty();
    }
    return summary;
}

double positive_idf_integral(const std::vector<FlowRecord>& records) {
    double total = 0.0;
    for (std::size_t k = 1; k < records.size(); ++k) {
        const FlowRecord& a = records[k - 1];
        const FlowRecord& b = records[k];
        if (!a.defined || !b.defined) continue;
        const double fa = std::max(a.idf, 0.0);
        const double fb = std::max(b.idf, 0.0);
        total += 0.5 * (fa + fb) * (b.t - a.t);
    }
    return total;
}

} // namespace idflow
