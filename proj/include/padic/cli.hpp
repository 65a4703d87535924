#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace padic {

// Everything one experiment run needs, as parsed from flags and/or a flat
// key = value config file.  Literals stay text here; they are parsed against
// the ambient prime during validation so the errors can name the field.
struct ExperimentConfig {
    std::string experiment;
    long long prime = 0;
    std::string theta;          // literal, e.g. "1+p^3"
    std::string q;              // literal; map parameter
    long long q_states = 0;     // spin states; tree measure experiments
    long long precision = 0;    // 0 picks the library default
    std::uint64_t seed = 1;
    long long max_iter = 64;
    long long period_count = 1; // m for count-bound
    std::string start;          // x0 literal for orbit / classify
    std::string form;           // ti-solve pattern filter: A..E, empty = all
    long long samples = 100;    // sampling experiments
    bool timing = false;        // include wall-clock time (breaks byte stability)
};

// Rendered JSON report plus the process exit code: 0 success, 1 error
// (the error is embedded in the report), 2 when a result is undecided.
struct Report {
    std::string json;
    int exit_code = 0;
};

// Names accepted in ExperimentConfig::experiment, in display order.
const std::vector<std::string>& experiment_names();

// Validates the config (config_error with the offending field on bad input),
// dispatches to the named experiment, and assembles the report.  Errors
// raised by the experiment itself are captured into the report rather than
// thrown.  Identical configs produce byte-identical reports unless `timing`
// is set.
Report run_experiment(const ExperimentConfig& config);

}  // namespace padic
