#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "idflow/errors.hpp"
#include "idflow/runner.hpp"

namespace {

std::string read_config_file(const std::string& path) {
    if (path.empty()) return "";
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw idflow::IoError("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split_formats(const std::string& csv) {
    std::vector<std::string> formats;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (!token.empty()) formats.push_back(token);
    }
    return formats;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Fisher metric and information-flow toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format_csv;
    int threads = 1;

    for (const std::string name : {"qfm", "evolve", "field", "witness"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format_csv,
                        "comma-separated subset of csv,json,svg");
        sub->add_option("--threads", threads, "worker threads for field sampling");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help
        }
        std::cerr << "usage error: " << e.what() << std::endl;
        return 2;
    }

    try {
        const std::string sub = app.get_subcommands().front()->get_name();
        idflow::ExperimentConfig config =
            idflow::parse_config(read_config_file(config_path));

        idflow::RunOptions opts;
        opts.out_dir = out_dir.empty() ? config.outputs.directory : out_dir;
        opts.formats = split_formats(format_csv);
        if (const char* env = std::getenv("IDFLOW_THREADS")) {
            threads = std::max(1, std::atoi(env));
        }
        opts.threads = std::max(1, threads);

        idflow::run_subcommand(sub, config, opts);
        return 0;
    } catch (const idflow::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
