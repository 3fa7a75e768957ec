#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "idflow/master_equation.hpp"
#include "idflow/qubit.hpp"

namespace idflow {

enum class FieldKind { Idqs, Idf, Ridf, Gamma };

std::string field_kind_name(FieldKind kind);
FieldKind field_kind_from_name(const std::string& name);

struct DissipativeSpec {
    double lambda = 1.0;
    double W = 3.0;
};

struct RateSpec {
    enum class Kind { Constant, DissipativeGamma, Table };
    Kind kind = Kind::Constant;
    double value = 1.0;                  // Constant
    DissipativeSpec gamma_model;         // DissipativeGamma
    std::vector<double> times, values;   // Table (linear interpolation)

    RateFn make() const;
};

struct CustomChannelSpec {
    ComplexMatrix matrix;
    RateSpec rate;
};

struct CustomModelSpec {
    ComplexMatrix hamiltonian; // zero matrix when omitted
    std::vector<CustomChannelSpec> channels;
};

struct GridSpec {
    std::array<std::string, 2> axes = {"n1", "n3"};
    std::string fixed_axis = "n2";
    double fixed_value = 0.0;
    std::array<std::array<double, 2>, 2> ranges = {{{-1.0, 1.0}, {-1.0, 1.0}}};
    std::array<int, 2> resolution = {101, 101};
};

struct TimesSpec {
    double t_max = 3.0; // units of 1/lambda
    int steps = 2000;
    std::vector<double> snapshots = {0.02, 0.1, 0.5, 1.0};
};

struct OutputSpec {
    std::vector<std::string> formats = {"csv", "json", "svg"};
    std::string directory = "out";
    std::vector<FieldKind> fields = {FieldKind::Idqs, FieldKind::Idf,
                                     FieldKind::Ridf};
};

struct ExperimentConfig {
    std::variant<DissipativeSpec, CustomModelSpec> model = DissipativeSpec{};
    GridSpec grid;
    TimesSpec times;
    OutputSpec outputs;
    std::vector<BlochVector> points; // evolve initial states

    bool dissipative() const {
        return std::holds_alternative<DissipativeSpec>(model);
    }
    const DissipativeSpec& dissipative_spec() const {
        return std::get<DissipativeSpec>(model);
    }
    const CustomModelSpec& custom_spec() const {
        return std::get<CustomModelSpec>(model);
    }

    /// "weak" or "strong" for the dissipative model, "custom" otherwise.
    std::string regime() const;

    /// Uniform integration grid [0, t_max] with `steps` steps.
    std::vector<double> time_grid() const;

    MasterEquation master_equation() const;
};

/// Parses and validates a JSON config, filling defaults. An empty object
/// yields the stock strong-coupling setup (W = 3 lambda, 101x101 n1-n3
/// plane at n2 = 0, snapshots at lambda t in {0.02, 0.1, 0.5, 1.0}, four
/// canonical initial states). Throws SchemaError with the offending field
/// path, RangeError for out-of-range values.
ExperimentConfig parse_config(const std::string& text);

/// Canonical JSON echo of a parsed config (includes derived regime).
std::string config_to_json(const ExperimentConfig& config);

/// The four canonical initial states with r0 = sqrt(0.9):
/// (0,0,r0), (r0,0,0), (0,0,-r0), (0,0,0).
std::vector<BlochVector> default_points();

} // namespace idflow
