#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "padic/cli.hpp"
#include "padic/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"p-adic rational dynamics and Cayley tree measure experiments"};
    padic::ExperimentConfig config;
    std::string out_path;

    std::string names;
    for (const auto& name : padic::experiment_names())
        names += (names.empty() ? "" : ", ") + name;

    app.set_config("--config", "",
                   "flat key = value configuration file; flags override it");
    app.add_option("experiment,--experiment", config.experiment,
                   "experiment to run: " + names);
    app.add_option("--prime", config.prime, "ambient prime p");
    app.add_option("--theta", config.theta,
                   "theta literal, e.g. 1+p^3 or 344 or 50/3");
    app.add_option("--q", config.q, "q literal (rational map parameter)");
    app.add_option("--q-states", config.q_states,
                   "number of spin states (tree measure experiments)");
    app.add_option("--precision", config.precision,
                   "unit digits carried by parsed values")
        ->envname("PBDYN_PRECISION");
    app.add_option("--seed", config.seed, "seed for sampled experiments");
    app.add_option("--max-iter", config.max_iter,
                   "iteration / enumeration depth budget");
    app.add_option("--x0", config.start,
                   "start point literal (orbit, classify)");
    app.add_option("--form", config.form,
                   "restrict ti-solve to one value pattern (A..E)");
    app.add_option("--m", config.period_count, "period count (count-bound)");
    app.add_option("--samples", config.samples,
                   "sample count (conjugacy, small-prime)");
    app.add_flag("--timing", config.timing,
                 "include wall-clock timing in the report (makes the output "
                 "nondeterministic)");
    app.add_option("--out", out_path, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        padic::Report report = padic::run_experiment(config);
        if (out_path.empty()) {
            std::cout << report.json;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "cannot open output file: " << out_path << "\n";
                return 1;
            }
            out << report.json;
        }
        return report.exit_code;
    } catch (const padic::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
}
