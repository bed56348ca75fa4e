// coverlab: config-driven cover-time experiments.
//
//   coverlab run <config-file>        run an experiment, write outputs
//   coverlab validate <config-file>   schema-check a config and exit
//   coverlab list-experiments         print experiment kinds and defaults
//
// Exit codes: 0 ok, 1 a bound verdict came back "violated", 2 config error,
// 3 runtime failure.

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "coverlab/config.hpp"
#include "coverlab/experiments.hpp"

namespace {

int cmd_run(const std::string& path) {
    const auto cfg = coverlab::ExperimentConfig::from_file(path);
    const auto result = coverlab::run_experiment(cfg);
    std::cout << "wrote " << (result.out_dir / "summary.json").string() << "\n";
    for (const auto& p : result.csv_files) std::cout << "wrote " << p.string() << "\n";
    for (const auto& r : result.reports)
        std::cout << "[" << coverlab::verdict_name(r.verdict) << "] " << r.name
                  << "  lhs=" << r.lhs << " rhs=" << r.rhs << "\n";
    if (result.any_violated) {
        std::cout << "FAILED: at least one bound verdict is violated\n";
        return 1;
    }
    return 0;
}

int cmd_validate(const std::string& path) {
    const auto cfg = coverlab::ExperimentConfig::from_file(path);
    coverlab::validate_experiment_config(cfg);
    std::cout << "OK: " << cfg.require_str("experiment") << "\n";
    return 0;
}

int cmd_list() {
    for (const auto& info : coverlab::list_experiments()) {
        std::cout << info.name << "\n  " << info.description << "\n";
        for (const auto& [key, def] : info.defaults)
            std::cout << "    " << key << " (default: " << def << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cover-time experiments on compact metric spaces"};
    app.require_subcommand(1);

    std::string run_path, validate_path;
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", run_path, "config file")->required();
    auto* validate = app.add_subcommand("validate", "schema-check a config file");
    validate->add_option("config", validate_path, "config file")->required();
    app.add_subcommand("list-experiments", "print experiment kinds and their defaults");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_path);
        if (validate->parsed()) return cmd_validate(validate_path);
        return cmd_list();
    } catch (const coverlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
