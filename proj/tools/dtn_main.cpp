#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "dtn/error.hpp"
#include "dtn/experiment.hpp"

namespace {

// 2 for anything the user can fix in the config, 3 for solver breakdowns.
int exit_code_for(dtn::ErrorKind kind) {
    return kind == dtn::ErrorKind::numerical ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dtn: spectra, semigroups, and product approximants of "
                 "Dirichlet-to-Neumann operators"};
    app.require_subcommand(1);

    std::vector<std::string> run_configs;
    auto* run = app.add_subcommand("run", "execute the experiment described by each config");
    run->add_option("config", run_configs, "JSON config file(s)")
        ->required()
        ->check(CLI::ExistingFile);

    std::string val_config;
    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", val_config, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);

    auto* list = app.add_subcommand("list-experiments", "print the available experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is a config problem
    }

    try {
        if (list->parsed()) {
            for (const auto& name : dtn::experiment_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (validate->parsed()) {
            auto report = dtn::validate_config(val_config);
            std::printf("ok: %s\n", report.experiment.c_str());
            for (const auto& key : report.defaulted)
                std::printf("defaulted: %s\n", key.c_str());
            return 0;
        }
        for (const auto& path : run_configs) {
            auto cfg = dtn::parse_config(path);
            auto rep = dtn::run_experiment(cfg);
            std::printf("%s\n", rep.summary.c_str());
            std::printf("wrote %s\n", rep.dir.string().c_str());
        }
        return 0;
    } catch (const dtn::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
