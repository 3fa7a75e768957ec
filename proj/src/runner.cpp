#include "idflow/runner.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "idflow/errors.hpp"
#include "idflow/numerics.hpp"

namespace idflow {

namespace {

constexpr double kBackflowThreshold = 1e-10;

std::vector<std::string> effective_formats(const ExperimentConfig& config,
                                           const RunOptions& opts) {
    return opts.formats.empty() ? config.outputs.formats : opts.formats;
}

bool wants(const std::vector<std::string>& formats, const std::string& fmt) {
    return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

std::string prepare_out_dir(const RunOptions& opts) {
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + opts.out_dir +
                      "': " + ec.message());
    }
    return opts.out_dir;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

SeriesOutput evolve_dissipative(const DissipativeModel& model,
                                const BlochVector& n0,
                                const std::vector<double>& grid) {
    SeriesOutput series;
    series.point = n0;
    series.records.reserve(grid.size());
    for (double t : grid) {
        FlowRecord rec;
        rec.t = t;
        try {
            rec.gamma.push_back(model.gamma(t));
        } catch (const Pole& e) {
            rec.gamma.push_back(std::numeric_limits<double>::quiet_NaN());
            rec.defined = false;
            rec.reason = e.what();
            series.records.push_back(std::move(rec));
            continue;
        }
        try {
            rec.idqs = model.idqs(n0, t);
            rec.ridf = model.ridf(n0, t);
            rec.idf = rec.ridf * rec.idqs;
            // Single dissipation channel and no Hamiltonian: the whole
            // flow passes through it.
            rec.sub_idf.push_back(rec.idf);
            rec.defined = true;
        } catch (const Error& e) {
            rec.defined = false;
            rec.reason = e.what();
        }
        series.records.push_back(std::move(rec));
    }
    return series;
}

} // namespace

SeriesOutput evolve_point(const ExperimentConfig& config,
                          const BlochVector& point) {
    const std::vector<double> grid = config.time_grid();
    if (config.dissipative()) {
        const DissipativeSpec& spec = config.dissipative_spec();
        return evolve_dissipative(DissipativeModel(spec.lambda, spec.W), point,
                                  grid);
    }
    SeriesOutput series;
    series.point = point;
    ParameterPoint x0(3);
    x0 << point[0], point[1], point[2];
    series.records =
        flow_series(config.master_equation(), bloch_family(), x0, grid);
    return series;
}

RunOutput run_qfm(const ExperimentConfig& config, const RunOptions& opts) {
    const std::string dir = prepare_out_dir(opts);
    const std::vector<std::string> formats = effective_formats(config, opts);

    RunOutput run;
    run.config = config;
    for (const BlochVector& point : config.points) {
        ParameterPoint x0(3);
        x0 << point[0], point[1], point[2];
        const FisherMetric metric = qfm_at(bloch_family(), x0);
        MetricOutput out;
        out.point = point;
        out.g = metric.g;
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(metric.g);
        out.eigenvalues = solver.eigenvalues();
        out.idqs = idqs(metric);
        run.metrics.push_back(std::move(out));
    }

    if (wants(formats, "csv")) {
        std::ostringstream csv;
        csv << "n1,n2,n3,g11,g12,g13,g22,g23,g33,idqs\n";
        for (const MetricOutput& m : run.metrics) {
            csv << format_double(m.point[0]) << ',' << format_double(m.point[1])
                << ',' << format_double(m.point[2]);
            for (int i = 0; i < 3; ++i) {
                for (int j = i; j < 3; ++j) {
                    csv << ',' << format_double(m.g(i, j));
                }
            }
            csv << ',' << format_double(m.idqs) << '\n';
        }
        std::ofstream out(join_path(dir, "qfm.csv"), std::ios::binary);
        if (!out) throw IoError("cannot write qfm.csv");
        out << csv.str();
    }
    if (wants(formats, "json")) {
        emit_json(run, join_path(dir, "qfm.json"));
    }
    return run;
}

RunOutput run_evolve(const ExperimentConfig& config, const RunOptions& opts) {
    const std::string dir = prepare_out_dir(opts);
    const std::vector<std::string> formats = effective_formats(config, opts);

    RunOutput run;
    run.config = config;
    for (const BlochVector& point : config.points) {
        run.series.push_back(evolve_point(config, point));
    }

    if (wants(formats, "csv")) {
        for (std::size_t k = 0; k < run.series.size(); ++k) {
            emit_series_csv(run.series[k],
                            join_path(dir, "evolve_" + std::to_string(k + 1) +
                                               ".csv"));
        }
    }
    if (wants(formats, "json")) {
        emit_json(run, join_path(dir, "evolve.json"));
    }
    return run;
}

RunOutput run_field(const ExperimentConfig& config, const RunOptions& opts) {
    const std::string dir = prepare_out_dir(opts);
    const std::vector<std::string> formats = effective_formats(config, opts);

    RunOutput run;
    run.config = config;
    for (FieldKind kind : config.outputs.fields) {
        for (double t : config.times.snapshots) {
            if (kind == FieldKind::Gamma) {
                std::vector<FieldFrame> frames =
                    sample_gamma_fields(config, t, opts.threads);
                for (FieldFrame& frame : frames) {
                    run.frames.push_back(std::move(frame));
                }
            } else {
                run.frames.push_back(
                    sample_field(config, kind, t, opts.threads));
            }
        }
    }

    for (const FieldFrame& frame : run.frames) {
        std::ostringstream stem;
        stem << "field_" << field_kind_name(frame.field);
        if (frame.channel >= 0) stem << "_c" << frame.channel + 1;
        stem << "_t" << format_double(frame.time);
        if (wants(formats, "csv")) {
            emit_csv(frame, join_path(dir, stem.str() + ".csv"));
        }
        if (wants(formats, "svg")) {
            render_svg(frame, join_path(dir, stem.str() + ".svg"));
        }
    }
    if (wants(formats, "json")) {
        emit_json(run, join_path(dir, "field.json"));
    }
    return run;
}

RunOutput run_witness(const ExperimentConfig& config, const RunOptions& opts) {
    const std::string dir = prepare_out_dir(opts);
    const std::vector<std::string> formats = effective_formats(config, opts);
    const std::vector<double> grid = config.time_grid();
    const double grid_step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
    const MasterEquation me = config.master_equation();

    RunOutput run;
    run.config = config;
    for (const BlochVector& point : config.points) {
        SeriesOutput series = evolve_point(config, point);
        IntervalReport backflow =
            detect_backflow(series.records, kBackflowThreshold);
        std::vector<IntervalReport> rates = rate_sign_intervals(me, grid);
        run.summaries.push_back(
            witness_agreement(backflow, rates, grid_step));
        run.reports.push_back(std::move(backflow));
        for (IntervalReport& report : rates) {
            run.reports.push_back(std::move(report));
        }
        run.series.push_back(std::move(series));
    }

    if (wants(formats, "csv")) {
        std::ostringstream csv;
        csv << "point,kind,channel,sign,t_start,t_end,extreme_t,extreme_value\n";
        std::size_t reports_per_point =
            config.points.empty() ? 0 : run.reports.size() / config.points.size();
        for (std::size_t r = 0; r < run.reports.size(); ++r) {
            const IntervalReport& report = run.reports[r];
            const std::size_t point_index =
                reports_per_point == 0 ? 0 : r / reports_per_point;
            for (const Interval& iv : report.intervals) {
                csv << point_index + 1 << ','
                    << (report.kind == WitnessKind::IdfPositive
                            ? "idf_positive"
                            : "rate_sign")
                    << ',' << report.channel << ',' << iv.sign << ','
                    << format_double(iv.t_start) << ','
                    << format_double(iv.t_end) << ','
                    << format_double(iv.extreme_t) << ','
                    << format_double(iv.extreme_value) << '\n';
            }
        }
        std::ofstream out(join_path(dir, "witness.csv"), std::ios::binary);
        if (!out) throw IoError("cannot write witness.csv");
        out << csv.str();
    }
    if (wants(formats, "json")) {
        emit_json(run, join_path(dir, "witness.json"));
    }
    return run;
}

RunOutput run_subcommand(const std::string& name,
                         const ExperimentConfig& config,
                         const RunOptions& opts) {
    if (name == "qfm") return run_qfm(config, opts);
    if (name == "evolve") return run_evolve(config, opts);
    if (name == "field") return run_field(config, opts);
    if (name == "witness") return run_witness(config, opts);
    throw RangeError("unknown subcommand '" + name + "'");
}

} // namespace idflow
