#include "idflow/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "idflow/errors.hpp"

namespace idflow {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, result.ptr);
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

json json_num(double x) {
    if (std::isfinite(x)) return json(x);
    return json(nullptr);
}

double num_from(const json& node) {
    if (node.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return node.get<double>();
}

} // namespace

std::string frame_to_csv(const FieldFrame& frame) {
    std::ostringstream out;
    out << "axis1,axis2,value,mask\n";
    for (std::size_t i = 0; i < frame.axis1.size(); ++i) {
        for (std::size_t j = 0; j < frame.axis2.size(); ++j) {
            const std::size_t idx = frame.index(i, j);
            out << format_double(frame.axis1[i]) << ','
                << format_double(frame.axis2[j]) << ',';
            if (frame.mask[idx] == MaskReason::None) {
                out << format_double(frame.values[idx]);
            }
            out << ',' << mask_reason_name(frame.mask[idx]) << '\n';
        }
    }
    return out.str();
}

void emit_csv(const FieldFrame& frame, const std::string& path) {
    write_file(path, frame_to_csv(frame));
}

std::string series_to_csv(const SeriesOutput& series) {
    const std::size_t n_channels =
        series.records.empty() ? 0 : series.records.front().gamma.size();
    std::ostringstream out;
    out << "t,idqs,idf,ridf";
    for (std::size_t c = 0; c < n_channels; ++c) out << ",sub_idf_" << c + 1;
    for (std::size_t c = 0; c < n_channels; ++c) out << ",gamma_" << c + 1;
    out << ",defined\n";
    for (const FlowRecord& rec : series.records) {
        auto cell = [](double x) {
            return std::isfinite(x) ? format_double(x) : std::string();
        };
        out << format_double(rec.t) << ',' << cell(rec.idqs) << ','
            << cell(rec.idf) << ',' << cell(rec.ridf);
        for (std::size_t c = 0; c < n_channels; ++c) {
            out << ',' << (c < rec.sub_idf.size() ? cell(rec.sub_idf[c]) : "");
        }
        for (std::size_t c = 0; c < n_channels; ++c) {
            out << ',' << (c < rec.gamma.size() ? cell(rec.gamma[c]) : "");
        }
        out << ',' << (rec.defined ? 1 : 0) << '\n';
    }
    return out.str();
}

void emit_series_csv(const SeriesOutput& series, const std::string& path) {
    write_file(path, series_to_csv(series));
}

namespace {

json frame_to_json_obj(const FieldFrame& frame) {
    json node;
    node["field"] = field_kind_name(frame.field);
    node["time"] = frame.time;
    if (frame.channel >= 0) node["channel"] = frame.channel;
    node["axis_labels"] = {frame.axis_labels[0], frame.axis_labels[1]};
    node["axis1"] = frame.axis1;
    node["axis2"] = frame.axis2;
    json values = json::array();
    json mask = json::array();
    for (std::size_t i = 0; i < frame.axis1.size(); ++i) {
        json vrow = json::array();
        json mrow = json::array();
        for (std::size_t j = 0; j < frame.axis2.size(); ++j) {
            const std::size_t idx = frame.index(i, j);
            vrow.push_back(json_num(frame.values[idx]));
            mrow.push_back(mask_reason_name(frame.mask[idx]));
        }
        values.push_back(std::move(vrow));
        mask.push_back(std::move(mrow));
    }
    node["values"] = std::move(values);
    node["mask"] = std::move(mask);
    return node;
}

MaskReason mask_from_name(const std::string& name) {
    if (name == "boundary") return MaskReason::Boundary;
    if (name == "pole") return MaskReason::Pole;
    if (name == "undefined") return MaskReason::Undefined;
    return MaskReason::None;
}

FieldFrame frame_from_json_obj(const json& node) {
    FieldFrame frame;
    frame.field = field_kind_from_name(node.at("field").get<std::string>());
    frame.time = node.at("time").get<double>();
    frame.channel = node.contains("channel") ? node["channel"].get<int>() : -1;
    frame.axis_labels = {node.at("axis_labels")[0].get<std::string>(),
                         node.at("axis_labels")[1].get<std::string>()};
    frame.axis1 = node.at("axis1").get<std::vector<double>>();
    frame.axis2 = node.at("axis2").get<std::vector<double>>();
    const json& values = node.at("values");
    const json& mask = node.at("mask");
    frame.values.resize(frame.axis1.size() * frame.axis2.size());
    frame.mask.resize(frame.values.size());
    for (std::size_t i = 0; i < frame.axis1.size(); ++i) {
        for (std::size_t j = 0; j < frame.axis2.size(); ++j) {
            const std::size_t idx = frame.index(i, j);
            frame.values[idx] = num_from(values[i][j]);
            frame.mask[idx] = mask_from_name(mask[i][j].get<std::string>());
        }
    }
    return frame;
}

json record_to_json_obj(const FlowRecord& rec) {
    json node;
    node["t"] = rec.t;
    node["idqs"] = json_num(rec.idqs);
    node["idf"] = json_num(rec.idf);
    node["ridf"] = json_num(rec.ridf);
    json sub = json::array();
    for (double v : rec.sub_idf) sub.push_back(json_num(v));
    node["sub_idf"] = std::move(sub);
    json gamma = json::array();
    for (double v : rec.gamma) gamma.push_back(json_num(v));
    node["gamma"] = std::move(gamma);
    node["defined"] = rec.defined;
    if (!rec.reason.empty()) node["reason"] = rec.reason;
    return node;
}

FlowRecord record_from_json_obj(const json& node) {
    FlowRecord rec;
    rec.t = node.at("t").get<double>();
    rec.idqs = num_from(node.at("idqs"));
    rec.idf = num_from(node.at("idf"));
    rec.ridf = num_from(node.at("ridf"));
    for (const json& v : node.at("sub_idf")) rec.sub_idf.push_back(num_from(v));
    for (const json& v : node.at("gamma")) rec.gamma.push_back(num_from(v));
    rec.defined = node.at("defined").get<bool>();
    if (node.contains("reason")) rec.reason = node["reason"].get<std::string>();
    return rec;
}

json interval_to_json_obj(const Interval& iv) {
    return json{{"t_start", iv.t_start},
                {"t_end", iv.t_end},
                {"sign", iv.sign},
                {"extreme_t", json_num(iv.extreme_t)},
                {"extreme_value", json_num(iv.extreme_value)},
                {"idqs_min_t", json_num(iv.idqs_min_t)},
                {"idqs_min", json_num(iv.idqs_min)}};
}

Interval interval_from_json_obj(const json& node) {
    Interval iv;
    iv.t_start = node.at("t_start").get<double>();
    iv.t_end = node.at("t_end").get<double>();
    iv.sign = node.at("sign").get<int>();
    iv.extreme_t = num_from(node.at("extreme_t"));
    iv.extreme_value = num_from(node.at("extreme_value"));
    iv.idqs_min_t = num_from(node.at("idqs_min_t"));
    iv.idqs_min = num_from(node.at("idqs_min"));
    return iv;
}

json report_to_json_obj(const IntervalReport& report) {
    json node;
    node["kind"] = report.kind == WitnessKind::IdfPositive ? "idf_positive"
                                                           : "rate_negative";
    node["channel"] = report.channel;
    json intervals = json::array();
    for (const Interval& iv : report.intervals) {
        intervals.push_back(interval_to_json_obj(iv));
    }
    node["intervals"] = std::move(intervals);
    return node;
}

IntervalReport report_from_json_obj(const json& node) {
    IntervalReport report;
    report.kind = node.at("kind").get<std::string>() == "idf_positive"
                      ? WitnessKind::IdfPositive
                      : WitnessKind::RateNegative;
    report.channel = node.at("channel").get<int>();
    for (const json& iv : node.at("intervals")) {
        report.intervals.push_back(interval_from_json_obj(iv));
    }
    return report;
}

json summary_to_json_obj(const WitnessSummary& summary) {
    json node;
    node["n_channels"] = summary.n_channels;
    node["single_channel_containment"] = summary.single_channel_containment;
    json cex = json::array();
    for (const WitnessCounterexample& c : summary.counterexamples) {
        cex.push_back(json{{"interval", interval_to_json_obj(c.idf_interval)},
                           {"note", c.note}});
    }
    node["counterexamples"] = std::move(cex);
    return node;
}

WitnessSummary summary_from_json_obj(const json& node) {
    WitnessSummary summary;
    summary.n_channels = node.at("n_channels").get<std::size_t>();
    summary.single_channel_containment =
        node.at("single_channel_containment").get<bool>();
    for (const json& c : node.at("counterexamples")) {
        summary.counterexamples.push_back(
            {interval_from_json_obj(c.at("interval")),
             c.at("note").get<std::string>()});
    }
    return summary;
}

} // namespace

namespace {

json metric_to_json_obj(const MetricOutput& m) {
    json g = json::array();
    for (Eigen::Index i = 0; i < m.g.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.g.cols(); ++j) row.push_back(m.g(i, j));
        g.push_back(std::move(row));
    }
    json evs = json::array();
    for (Eigen::Index k = 0; k < m.eigenvalues.size(); ++k) {
        evs.push_back(m.eigenvalues[k]);
    }
    return json{{"point", json::array({m.point[0], m.point[1], m.point[2]})},
                {"g", std::move(g)},
                {"eigenvalues", std::move(evs)},
                {"idqs", m.idqs}};
}

MetricOutput metric_from_json_obj(const json& node) {
    MetricOutput m;
    m.point = BlochVector(node.at("point")[0].get<double>(),
                          node.at("point")[1].get<double>(),
                          node.at("point")[2].get<double>());
    const json& g = node.at("g");
    m.g.resize(g.size(), g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g[i].size(); ++j) {
            m.g(i, j) = g[i][j].get<double>();
        }
    }
    const json& evs = node.at("eigenvalues");
    m.eigenvalues.resize(evs.size());
    for (std::size_t k = 0; k < evs.size(); ++k) {
        m.eigenvalues[k] = evs[k].get<double>();
    }
    m.idqs = node.at("idqs").get<double>();
    return m;
}

} // namespace

std::string run_to_json(const RunOutput& run) {
    json root;
    root["config"] = json::parse(config_to_json(run.config));
    json metrics = json::array();
    for (const MetricOutput& m : run.metrics) {
        metrics.push_back(metric_to_json_obj(m));
    }
    root["metrics"] = std::move(metrics);
    json frames = json::array();
    for (const FieldFrame& frame : run.frames) {
        frames.push_back(frame_to_json_obj(frame));
    }
    root["frames"] = std::move(frames);
    json series = json::array();
    for (const SeriesOutput& s : run.series) {
        json node;
        node["point"] = json::array({s.point[0], s.point[1], s.point[2]});
        json records = json::array();
        for (const FlowRecord& rec : s.records) {
            records.push_back(record_to_json_obj(rec));
        }
        node["records"] = std::move(records);
        series.push_back(std::move(node));
    }
    root["series"] = std::move(series);
    json reports = json::array();
    for (const IntervalReport& report : run.reports) {
        reports.push_back(report_to_json_obj(report));
    }
    root["reports"] = std::move(reports);
    json summaries = json::array();
    for (const WitnessSummary& summary : run.summaries) {
        summaries.push_back(summary_to_json_obj(summary));
    }
    root["summaries"] = std::move(summaries);
    return root.dump(2) + "\n";
}

void emit_json(const RunOutput& run, const std::string& path) {
    write_file(path, run_to_json(run));
}

RunOutput parse_run(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("run: invalid JSON: ") + e.what());
    }
    RunOutput run;
    run.config = parse_config(root.at("config").dump());
    for (const json& m : root.at("metrics")) {
        run.metrics.push_back(metric_from_json_obj(m));
    }
    for (const json& frame : root.at("frames")) {
        run.frames.push_back(frame_from_json_obj(frame));
    }
    for (const json& s : root.at("series")) {
        SeriesOutput series;
        series.point = BlochVector(s.at("point")[0].get<double>(),
                                   s.at("point")[1].get<double>(),
                                   s.at("point")[2].get<double>());
        for (const json& rec : s.at("records")) {
            series.records.push_back(record_from_json_obj(rec));
        }
        run.series.push_back(std::move(series));
    }
    for (const json& report : root.at("reports")) {
        run.reports.push_back(report_from_json_obj(report));
    }
    for (const json& summary : root.at("summaries")) {
        run.summaries.push_back(summary_from_json_obj(summary));
    }
    return run;
}

namespace {

struct Rgb {
    int r, g, b;
};

std::string hex_color(const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return std::string(buf);
}

Rgb lerp(const Rgb& a, const Rgb& b, double s) {
    s = std::clamp(s, 0.0, 1.0);
    return Rgb{static_cast<int>(std::lround(a.r + s * (b.r - a.r))),
               static_cast<int>(std::lround(a.g + s * (b.g - a.g))),
               static_cast<int>(std::lround(a.b + s * (b.b - a.b)))};
}

// Sequential: white -> dark blue. Diverging: blue -> white -> red.
std::string sequential_color(double s) {
    return hex_color(lerp(Rgb{247, 251, 255}, Rgb{8, 81, 156}, s));
}

std::string diverging_color(double s) {
    if (s < 0.5) {
        return hex_color(lerp(Rgb{33, 102, 172}, Rgb{255, 255, 255}, s * 2.0));
    }
    return hex_color(lerp(Rgb{255, 255, 255}, Rgb{178, 24, 43}, (s - 0.5) * 2.0));
}

std::string svg_num(double x) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << x;
    return out.str();
}

} // namespace

std::string frame_to_svg(const FieldFrame& frame) {
    const std::size_t n1 = frame.axis1.size();
    const std::size_t n2 = frame.axis2.size();
    const bool signed_field = frame.field != FieldKind::Idqs;

    double vmin = 0.0, vmax = 0.0;
    bool any = false;
    for (std::size_t idx = 0; idx < frame.values.size(); ++idx) {
        if (frame.mask[idx] != MaskReason::None) continue;
        const double v = frame.values[idx];
        if (!any) {
            vmin = vmax = v;
            any = true;
        } else {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    if (!any) {
        vmin = 0.0;
        vmax = 1.0;
    }

    double lo = vmin, hi = vmax;
    if (signed_field) {
        const double mag = std::max(std::abs(vmin), std::abs(vmax));
        lo = -(mag > 0.0 ? mag : 1.0);
        hi = mag > 0.0 ? mag : 1.0;
    } else if (hi <= lo) {
        hi = lo + 1.0;
    }

    const double plot = 440.0;
    const double cw = plot / static_cast<double>(n1);
    const double ch = plot / static_cast<double>(n2);
    const double mx = 70.0, my = 50.0;
    const double width = mx + plot + 110.0;
    const double height = my + plot + 60.0;

    auto color_of = [&](double v) {
        double s = (v - lo) / (hi - lo);
        if (hi == lo) s = 0.5;
        return signed_field ? diverging_color(s) : sequential_color(s);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(width)
        << "\" height=\"" << svg_num(height) << "\" viewBox=\"0 0 "
        << svg_num(width) << ' ' << svg_num(height) << "\">\n";
    out << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" "
           "patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">"
           "<rect width=\"6\" height=\"6\" fill=\"#d9d9d9\"/>"
           "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#888888\" "
           "stroke-width=\"2\"/></pattern></defs>\n";
    out << "<rect width=\"" << svg_num(width) << "\" height=\"" << svg_num(height)
        << "\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"" << svg_num(mx) << "\" y=\"28\" font-family=\"sans-serif\" "
           "font-size=\"18\">"
        << field_kind_name(frame.field);
    if (frame.channel >= 0) out << " [channel " << frame.channel << "]";
    out << "  \xce\xbbt=" << format_double(frame.time) << "</text>\n";

    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t idx = frame.index(i, j);
            const double x = mx + static_cast<double>(i) * cw;
            const double y = my + static_cast<double>(n2 - 1 - j) * ch;
            const std::string fill =
                frame.mask[idx] == MaskReason::None
                    ? color_of(frame.values[idx])
                    : std::string("url(#hatch)");
            out << "<rect x=\"" << svg_num(x) << "\" y=\"" << svg_num(y)
                << "\" width=\"" << svg_num(cw) << "\" height=\"" << svg_num(ch)
                << "\" fill=\"" << fill << "\"/>\n";
        }
    }

    // Axis labels.
    out << "<text x=\"" << svg_num(mx + plot / 2) << "\" y=\""
        << svg_num(my + plot + 36) << "\" font-family=\"sans-serif\" "
           "font-size=\"14\" text-anchor=\"middle\">"
        << frame.axis_labels[0] << "</text>\n";
    out << "<text x=\"" << svg_num(mx - 40) << "\" y=\""
        << svg_num(my + plot / 2)
        << "\" font-family=\"sans-serif\" font-size=\"14\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 " << svg_num(mx - 40)
        << ' ' << svg_num(my + plot / 2) << ")\">" << frame.axis_labels[1]
        << "</text>\n";

    // Color bar: discretized gradient plus min/0/max ticks.
    const double bx = mx + plot + 24.0;
    const int bands = 64;
    const double bh = plot / bands;
    for (int b = 0; b < bands; ++b) {
        const double s = (static_cast<double>(b) + 0.5) / bands;
        const double v = lo + s * (hi - lo);
        const double y = my + plot - (b + 1) * bh;
        out << "<rect x=\"" << svg_num(bx) << "\" y=\"" << svg_num(y)
            << "\" width=\"16\" height=\"" << svg_num(bh + 0.5) << "\" fill=\""
            << color_of(v) << "\"/>\n";
    }
    auto tick = [&](double v) {
        const double s = (v - lo) / (hi - lo);
        const double y = my + plot - s * plot;
        out << "<line x1=\"" << svg_num(bx + 16) << "\" y1=\"" << svg_num(y)
            << "\" x2=\"" << svg_num(bx + 21) << "\" y2=\"" << svg_num(y)
            << "\" stroke=\"#000000\"/>\n";
        out << "<text x=\"" << svg_num(bx + 25) << "\" y=\"" << svg_num(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(v) << "</text>\n";
    };
    tick(lo);
    if (lo < 0.0 && hi > 0.0) tick(0.0);
    tick(hi);

    out << "</svg>\n";
    return out.str();
}

void render_svg(const FieldFrame& frame, const std::string& path) {
    write_file(path, frame_to_svg(frame));
}

} // namespace idflow
