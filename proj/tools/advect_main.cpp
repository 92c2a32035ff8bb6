// advect: configuration-driven experiment runner for the 2D upwind
// finite-volume advection solver.
//
// Subcommands:
//   run <config>       run one experiment, write report/energy/error CSVs
//   converge <study>   run a refinement study, fit the EOC, write plot
//   validate <config>  schema check only
//
// Exit codes: 0 ok, 2 validation error, 3 numerical invariant violation,
// 4 measured order outside the study window.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "advect/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"2D upwind finite-volume advection: experiments and convergence studies"};
    app.require_subcommand(1);

    std::string run_config, study_config, validate_config;
    bool validate_study = false;

    CLI::App* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", run_config, "experiment config file")->required();

    CLI::App* conv = app.add_subcommand("converge", "run a refinement study");
    conv->add_option("study", study_config, "study config file")->required();

    CLI::App* val = app.add_subcommand("validate", "check a config file against the schema");
    val->add_option("config", validate_config, "config file")->required();
    val->add_flag("--study", validate_study, "validate as a study config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = advect::load_experiment_config(run_config);
            const auto outcome = advect::run_experiment(cfg, std::cout);
            if (outcome.exit_code == advect::kExitOk)
                std::cout << "wrote " << outcome.directory.string() << "\n";
            return outcome.exit_code;
        }
        if (conv->parsed()) {
            const auto study = advect::load_study_config(study_config);
            const auto outcome = advect::converge_study(study, std::cout);
            if (outcome.exit_code == advect::kExitWindow)
                std::cout << "EOC " << outcome.table.fit.slope
                          << " outside the study window\n";
            return outcome.exit_code;
        }
        if (validate_study)
            advect::load_study_config(validate_config);
        else
            advect::load_experiment_config(validate_config);
        std::cout << "config ok\n";
        return advect::kExitOk;
    } catch (const advect::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return advect::kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return advect::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return advect::kExitInvariant;
    }
}
