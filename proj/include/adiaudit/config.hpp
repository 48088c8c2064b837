#pragma once

#include <cmath>
#include <string>

#include "adiaudit/hamiltonians.hpp"

namespace adiaudit {

/// Run configuration shared by the command-line front end. File keys mirror
/// the fields; flags override file values.
struct AuditConfig {
    std::string model = "spin";  // spin | table | counterexample-b
    double omega0 = 10.0;
    double omega = 0.1;
    double theta = M_PI / 2.0;
    double tmax = 100.0;
    int steps = 20000;
    int n_index = 0;
    double epsilon = 0.1;
    double T = 1.0;            // rescaling factor; 1 leaves the model alone
    std::string table;         // sample-table path for model=table
    std::string base = "spin"; // base of the counterexample pair

    void validate() const;

    /// Instantiates the configured model (including the counterexample
    /// construction, which integrates the base propagator on the grid).
    HamiltonianModel build_model() const;
    TimeGrid build_grid() const;
};

/// Flat key=value text; '#' starts a comment. Unknown keys are rejected.
AuditConfig load_config(const std::string& path);
void apply_config_line(AuditConfig& config, const std::string& key, const std::string& value);

}  // namespace adiaudit
