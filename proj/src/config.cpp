#include "idflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "idflow/errors.hpp"

namespace idflow {

using json = nlohmann::ordered_json;

std::string field_kind_name(FieldKind kind) {
    switch (kind) {
        case FieldKind::Idqs: return "idqs";
        case FieldKind::Idf: return "idf";
        case FieldKind::Ridf: return "ridf";
        case FieldKind::Gamma: return "gamma";
    }
    return "idqs";
}

FieldKind field_kind_from_name(const std::string& name) {
    if (name == "idqs") return FieldKind::Idqs;
    if (name == "idf") return FieldKind::Idf;
    if (name == "ridf") return FieldKind::Ridf;
    if (name == "gamma") return FieldKind::Gamma;
    throw SchemaError("unknown field kind '" + name + "'");
}

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw SchemaError(path + ": " + what);
}

[[noreturn]] void range_fail(const std::string& path, const std::string& what) {
    throw RangeError(path + ": " + what);
}

void check_keys(const json& node, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!node.is_object()) schema_fail(path, "expected an object");
    for (const auto& item : node.items()) {
        if (!allowed.count(item.key())) {
            schema_fail(path + "." + item.key(), "unknown field");
        }
    }
}

double get_number(const json& node, const std::string& path) {
    if (!node.is_number()) schema_fail(path, "expected a number");
    return node.get<double>();
}

int get_integer(const json& node, const std::string& path) {
    if (!node.is_number_integer()) schema_fail(path, "expected an integer");
    return node.get<int>();
}

std::string get_string(const json& node, const std::string& path) {
    if (!node.is_string()) schema_fail(path, "expected a string");
    return node.get<std::string>();
}

ComplexMatrix parse_matrix(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty()) {
        schema_fail(path, "expected a non-empty array of rows");
    }
    const std::size_t dim = node.size();
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const json& row = node[i];
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != dim) {
            schema_fail(row_path, "expected a row of " + std::to_string(dim) +
                                      " [re, im] pairs");
        }
        for (std::size_t j = 0; j < dim; ++j) {
            const json& entry = row[j];
            const std::string entry_path =
                row_path + "[" + std::to_string(j) + "]";
            if (!entry.is_array() || entry.size() != 2) {
                schema_fail(entry_path, "expected an [re, im] pair");
            }
            m(i, j) = Complex(get_number(entry[0], entry_path + "[0]"),
                              get_number(entry[1], entry_path + "[1]"));
        }
    }
    return m;
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

DissipativeSpec parse_dissipative(const json& node, const std::string& path) {
    check_keys(node, path, {"lambda", "W"});
    DissipativeSpec spec;
    if (node.contains("lambda")) {
        spec.lambda = get_number(node["lambda"], path + ".lambda");
    }
    if (node.contains("W")) {
        spec.W = get_number(node["W"], path + ".W");
    }
    if (!(spec.lambda > 0.0)) range_fail(path + ".lambda", "must be > 0");
    if (spec.W < 0.0) range_fail(path + ".W", "must be >= 0");
    return spec;
}

RateSpec parse_rate(const json& node, const std::string& path) {
    RateSpec rate;
    check_keys(node, path, {"constant", "dissipative_gamma", "table"});
    if (node.size() != 1) {
        schema_fail(path,
                    "expected exactly one of constant | dissipative_gamma | "
                    "table");
    }
    if (node.contains("constant")) {
        rate.kind = RateSpec::Kind::Constant;
        rate.value = get_number(node["constant"], path + ".constant");
    } else if (node.contains("dissipative_gamma")) {
        rate.kind = RateSpec::Kind::DissipativeGamma;
        rate.gamma_model =
            parse_dissipative(node["dissipative_gamma"], path + ".dissipative_gamma");
    } else {
        rate.kind = RateSpec::Kind::Table;
        const json& table = node["table"];
        check_keys(table, path + ".table", {"times", "values"});
        if (!table.contains("times") || !table.contains("values")) {
            schema_fail(path + ".table", "needs both times and values");
        }
        const json& times = table["times"];
        const json& values = table["values"];
        if (!times.is_array() || !values.is_array() ||
            times.size() != values.size() || times.size() < 2) {
            schema_fail(path + ".table",
                        "times and values must be equal-length arrays (>= 2)");
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
            rate.times.push_back(
                get_number(times[k], path + ".table.times[" + std::to_string(k) + "]"));
            rate.values.push_back(
                get_number(values[k], path + ".table.values[" + std::to_string(k) + "]"));
        }
        if (!std::is_sorted(rate.times.begin(), rate.times.end())) {
            range_fail(path + ".table.times", "must be ascending");
        }
    }
    return rate;
}

CustomModelSpec parse_custom(const json& node, const std::string& path) {
    check_keys(node, path, {"hamiltonian", "channels"});
    CustomModelSpec spec;
    if (node.contains("hamiltonian")) {
        spec.hamiltonian = parse_matrix(node["hamiltonian"], path + ".hamiltonian");
    }
    if (node.contains("channels")) {
        const json& channels = node["channels"];
        if (!channels.is_array()) schema_fail(path + ".channels", "expected an array");
        for (std::size_t k = 0; k < channels.size(); ++k) {
            const std::string ch_path =
                path + ".channels[" + std::to_string(k) + "]";
            const json& ch = channels[k];
            check_keys(ch, ch_path, {"matrix", "rate"});
            if (!ch.contains("matrix")) schema_fail(ch_path, "needs a matrix");
            CustomChannelSpec channel;
            channel.matrix = parse_matrix(ch["matrix"], ch_path + ".matrix");
            if (ch.contains("rate")) {
                channel.rate = parse_rate(ch["rate"], ch_path + ".rate");
            }
            spec.channels.push_back(std::move(channel));
        }
    }
    const Eigen::Index dim = spec.hamiltonian.rows() > 0
                                 ? spec.hamiltonian.rows()
                                 : (spec.channels.empty()
                                        ? 0
                                        : spec.channels.front().matrix.rows());
    if (dim == 0) {
        schema_fail(path, "custom model needs a hamiltonian or channels");
    }
    if (spec.hamiltonian.rows() == 0) {
        spec.hamiltonian = ComplexMatrix::Zero(dim, dim);
    }
    if (hermiticity_defect(spec.hamiltonian) > 1e-12) {
        range_fail(path + ".hamiltonian", "must be Hermitian");
    }
    for (std::size_t k = 0; k < spec.channels.size(); ++k) {
        if (spec.channels[k].matrix.rows() != dim) {
            range_fail(path + ".channels[" + std::to_string(k) + "].matrix",
                       "dimension mismatch with the model");
        }
    }
    return spec;
}

const std::set<std::string> kAxisNames = {"n1", "n2", "n3"};

GridSpec parse_grid(const json& node, const std::string& path) {
    GridSpec grid;
    check_keys(node, path, {"plane", "ranges", "resolution"});
    if (node.contains("plane")) {
        const json& plane = node["plane"];
        check_keys(plane, path + ".plane", {"axes", "fixed"});
        if (plane.contains("axes")) {
            const json& axes = plane["axes"];
            if (!axes.is_array() || axes.size() != 2) {
                schema_fail(path + ".plane.axes", "expected two axis names");
            }
            grid.axes[0] = get_string(axes[0], path + ".plane.axes[0]");
            grid.axes[1] = get_string(axes[1], path + ".plane.axes[1]");
            for (const std::string& axis : grid.axes) {
                if (!kAxisNames.count(axis)) {
                    schema_fail(path + ".plane.axes",
                                "axis must be one of n1, n2, n3");
                }
            }
            if (grid.axes[0] == grid.axes[1]) {
                schema_fail(path + ".plane.axes", "axes must differ");
            }
            for (const std::string& axis : kAxisNames) {
                if (axis != grid.axes[0] && axis != grid.axes[1]) {
                    grid.fixed_axis = axis;
                }
            }
        }
        if (plane.contains("fixed")) {
            const json& fixed = plane["fixed"];
            check_keys(fixed, path + ".plane.fixed", {grid.fixed_axis});
            if (fixed.contains(grid.fixed_axis)) {
                grid.fixed_value = get_number(fixed[grid.fixed_axis],
                                              path + ".plane.fixed." + grid.fixed_axis);
            }
        }
    }
    if (node.contains("ranges")) {
        const json& ranges = node["ranges"];
        if (!ranges.is_array() || ranges.size() != 2) {
            schema_fail(path + ".ranges", "expected two [lo, hi] pairs");
        }
        for (int a = 0; a < 2; ++a) {
            const json& pair = ranges[a];
            const std::string pair_path =
                path + ".ranges[" + std::to_string(a) + "]";
            if (!pair.is_array() || pair.size() != 2) {
                schema_fail(pair_path, "expected [lo, hi]");
            }
            grid.ranges[a][0] = get_number(pair[0], pair_path + "[0]");
            grid.ranges[a][1] = get_number(pair[1], pair_path + "[1]");
            if (!(grid.ranges[a][0] < grid.ranges[a][1])) {
                range_fail(pair_path, "lo must be < hi");
            }
        }
    }
    if (node.contains("resolution")) {
        const json& res = node["resolution"];
        if (!res.is_array() || res.size() != 2) {
            schema_fail(path + ".resolution", "expected two integers");
        }
        for (int a = 0; a < 2; ++a) {
            grid.resolution[a] = get_integer(
                res[a], path + ".resolution[" + std::to_string(a) + "]");
            if (grid.resolution[a] < 2) {
                range_fail(path + ".resolution[" + std::to_string(a) + "]",
                           "must be >= 2 per axis");
            }
        }
    }
    return grid;
}

TimesSpec parse_times(const json& node, const std::string& path) {
    TimesSpec times;
    check_keys(node, path, {"t_max", "steps", "snapshots"});
    if (node.contains("t_max")) {
        times.t_max = get_number(node["t_max"], path + ".t_max");
        if (!(times.t_max > 0.0)) range_fail(path + ".t_max", "must be > 0");
    }
    if (node.contains("steps")) {
        times.steps = get_integer(node["steps"], path + ".steps");
        if (times.steps < 2) range_fail(path + ".steps", "must be >= 2");
    }
    if (node.contains("snapshots")) {
        const json& snaps = node["snapshots"];
        if (!snaps.is_array() || snaps.empty()) {
            schema_fail(path + ".snapshots", "expected a non-empty array");
        }
        times.snapshots.clear();
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            times.snapshots.push_back(get_number(
                snaps[k], path + ".snapshots[" + std::to_string(k) + "]"));
        }
    }
    for (double t : times.snapshots) {
        if (t < 0.0 || t > times.t_max) {
            range_fail(path + ".snapshots",
                       "snapshot times must lie within [0, t_max]");
        }
    }
    return times;
}

OutputSpec parse_outputs(const json& node, const std::string& path) {
    OutputSpec outputs;
    check_keys(node, path, {"formats", "directory", "fields"});
    if (node.contains("formats")) {
        const json& formats = node["formats"];
        if (!formats.is_array()) schema_fail(path + ".formats", "expected an array");
        outputs.formats.clear();
        for (std::size_t k = 0; k < formats.size(); ++k) {
            const std::string fmt = get_string(
                formats[k], path + ".formats[" + std::to_string(k) + "]");
            if (fmt != "csv" && fmt != "json" && fmt != "svg") {
                schema_fail(path + ".formats[" + std::to_string(k) + "]",
                            "format must be csv, json, or svg");
            }
            outputs.formats.push_back(fmt);
        }
    }
    if (node.contains("directory")) {
        outputs.directory = get_string(node["directory"], path + ".directory");
    }
    if (node.contains("fields")) {
        const json& fields = node["fields"];
        if (!fields.is_array()) schema_fail(path + ".fields", "expected an array");
        outputs.fields.clear();
        for (std::size_t k = 0; k < fields.size(); ++k) {
            const std::string name = get_string(
                fields[k], path + ".fields[" + std::to_string(k) + "]");
            try {
                outputs.fields.push_back(field_kind_from_name(name));
            } catch (const SchemaError&) {
                schema_fail(path + ".fields[" + std::to_string(k) + "]",
                            "field must be idqs, idf, ridf, or gamma");
            }
        }
    }
    return outputs;
}

std::vector<BlochVector> parse_points(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty()) {
        schema_fail(path, "expected a non-empty array of [n1, n2, n3]");
    }
    std::vector<BlochVector> points;
    for (std::size_t k = 0; k < node.size(); ++k) {
        const json& p = node[k];
        const std::string p_path = path + "[" + std::to_string(k) + "]";
        if (!p.is_array() || p.size() != 3) {
            schema_fail(p_path, "expected [n1, n2, n3]");
        }
        BlochVector n(get_number(p[0], p_path + "[0]"),
                      get_number(p[1], p_path + "[1]"),
                      get_number(p[2], p_path + "[2]"));
        if (n.squaredNorm() > 1.0 + 1e-12) {
            range_fail(p_path, "point lies outside the unit ball");
        }
        points.push_back(n);
    }
    return points;
}

} // namespace

std::vector<BlochVector> default_points() {
    const double r0 = std::sqrt(0.9);
    return {BlochVector(0, 0, r0), BlochVector(r0, 0, 0),
            BlochVector(0, 0, -r0), BlochVector(0, 0, 0)};
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = text.empty() ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config: invalid JSON: ") + e.what());
    }
    // "regime" is emitted into config echoes as derived information and is
    // accepted (ignored) on input so emitted runs re-parse cleanly.
    check_keys(root, "config",
               {"model", "grid", "times", "outputs", "points", "regime"});

    ExperimentConfig config;
    if (root.contains("model")) {
        const json& model = root["model"];
        check_keys(model, "config.model", {"dissipative", "custom"});
        if (model.size() != 1) {
            schema_fail("config.model",
                        "expected exactly one of dissipative | custom");
        }
        if (model.contains("dissipative")) {
            config.model =
                parse_dissipative(model["dissipative"], "config.model.dissipative");
        } else {
            config.model = parse_custom(model["custom"], "config.model.custom");
        }
    }
    if (root.contains("grid")) {
        config.grid = parse_grid(root["grid"], "config.grid");
    }
    if (root.contains("times")) {
        config.times = parse_times(root["times"], "config.times");
    }
    if (root.contains("outputs")) {
        config.outputs = parse_outputs(root["outputs"], "config.outputs");
    }
    config.points =
        root.contains("points") ? parse_points(root["points"], "config.points")
                                : default_points();
    return config;
}

std::string ExperimentConfig::regime() const {
    if (!dissipative()) return "custom";
    const DissipativeSpec& spec = dissipative_spec();
    return spec.W < 0.5 * spec.lambda ? "weak" : "strong";
}

std::vector<double> ExperimentConfig::time_grid() const {
    std::vector<double> grid(times.steps + 1);
    for (int k = 0; k <= times.steps; ++k) {
        grid[k] = times.t_max * static_cast<double>(k) / times.steps;
    }
    return grid;
}

RateFn RateSpec::make() const {
    switch (kind) {
        case Kind::Constant: {
            const double v = value;
            return [v](double) { return v; };
        }
        case Kind::DissipativeGamma: {
            const DissipativeModel model(gamma_model.lambda, gamma_model.W);
            return [model](double t) {
                try {
                    return model.gamma(t);
                } catch (const Pole&) {
                    return std::numeric_limits<double>::infinity();
                }
            };
        }
        case Kind::Table: {
            const std::vector<double> ts = times;
            const std::vector<double> vs = values;
            return [ts, vs](double t) {
                if (t <= ts.front()) return vs.front();
                if (t >= ts.back()) return vs.back();
                const auto it =
                    std::upper_bound(ts.begin(), ts.end(), t);
                const std::size_t k = it - ts.begin();
                const double s = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
                return vs[k - 1] + s * (vs[k] - vs[k - 1]);
            };
        }
    }
    return [](double) { return 0.0; };
}

MasterEquation ExperimentConfig::master_equation() const {
    if (dissipative()) {
        const DissipativeSpec& spec = dissipative_spec();
        return DissipativeModel(spec.lambda, spec.W).master_equation(times.t_max);
    }
    const CustomModelSpec& spec = custom_spec();
    MasterEquation me;
    const ComplexMatrix h = spec.hamiltonian;
    if (h.cwiseAbs().maxCoeff() > 0.0) {
        me.hamiltonian = [h](double) { return h; };
    }
    for (const CustomChannelSpec& ch : spec.channels) {
        Channel channel;
        channel.jump_operator = ch.matrix;
        channel.rate = ch.rate.make();
        if (ch.rate.kind == RateSpec::Kind::DissipativeGamma) {
            channel.pole_times =
                DissipativeModel(ch.rate.gamma_model.lambda, ch.rate.gamma_model.W)
                    .h_zeros(times.t_max);
        }
        me.channels.push_back(std::move(channel));
    }
    return me;
}

namespace {

json rate_to_json(const RateSpec& rate) {
    json node;
    switch (rate.kind) {
        case RateSpec::Kind::Constant:
            node["constant"] = rate.value;
            break;
        case RateSpec::Kind::DissipativeGamma:
            node["dissipative_gamma"] = {{"lambda", rate.gamma_model.lambda},
                                         {"W", rate.gamma_model.W}};
            break;
        case RateSpec::Kind::Table:
            node["table"] = {{"times", rate.times}, {"values", rate.values}};
            break;
    }
    return node;
}

} // namespace

std::string config_to_json(const ExperimentConfig& config) {
    json root;
    json model;
    if (config.dissipative()) {
        const DissipativeSpec& spec = config.dissipative_spec();
        model["dissipative"] = {{"lambda", spec.lambda}, {"W", spec.W}};
    } else {
        const CustomModelSpec& spec = config.custom_spec();
        json custom;
        custom["hamiltonian"] = matrix_to_json(spec.hamiltonian);
        json channels = json::array();
        for (const CustomChannelSpec& ch : spec.channels) {
            channels.push_back(
                {{"matrix", matrix_to_json(ch.matrix)}, {"rate", rate_to_json(ch.rate)}});
        }
        custom["channels"] = std::move(channels);
        model["custom"] = std::move(custom);
    }
    root["model"] = std::move(model);
    root["regime"] = config.regime();
    root["grid"] = {
        {"plane",
         {{"axes", {config.grid.axes[0], config.grid.axes[1]}},
          {"fixed", {{config.grid.fixed_axis, config.grid.fixed_value}}}}},
        {"ranges",
         {{config.grid.ranges[0][0], config.grid.ranges[0][1]},
          {config.grid.ranges[1][0], config.grid.ranges[1][1]}}},
        {"resolution", {config.grid.resolution[0], config.grid.resolution[1]}}};
    root["times"] = {{"t_max", config.times.t_max},
                     {"steps", config.times.steps},
                     {"snapshots", config.times.snapshots}};
    json fields = json::array();
    for (FieldKind kind : config.outputs.fields) {
        fields.push_back(field_kind_name(kind));
    }
    root["outputs"] = {{"formats", config.outputs.formats},
                       {"directory", config.outputs.directory},
                       {"fields", std::move(fields)}};
    json points = json::array();
    for (const BlochVector& p : config.points) {
        points.push_back(json::array({p[0], p[1], p[2]}));
    }
    root["points"] = std::move(points);
    return root.dump(2);
}

} // namespace idflow
