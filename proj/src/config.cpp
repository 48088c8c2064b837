#include "adiaudit/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "adiaudit/errors.hpp"

namespace adiaudit {

void AuditConfig::validate() const {
    if (model != "spin" && model != "table" && model != "counterexample-b") {
        throw ParameterError("config: unknown model '" + model + "' (expected spin, table or counterexample-b)");
    }
    if (model == "counterexample-b" && base != "spin" && base != "table") {
        throw ParameterError("config: counterexample base must be spin or table");
    }
    if (!(epsilon > 0.0)) throw ParameterError("config: epsilon must be positive");
    if (!(tmax > 0.0)) throw ParameterError("config: tmax must be positive");
    if (steps < 2) throw ParameterError("config: steps must be at least 2");
    if (n_index < 0) throw ParameterError("config: n_index must be nonnegative");
    if (!(T > 0.0)) throw ParameterError("config: T must be positive");
    const bool needs_table = model == "table" || (model == "counterexample-b" && base == "table");
    if (needs_table) {
        if (table.empty()) throw ParameterError("config: model=table requires a table path");
        if (!std::filesystem::exists(table)) throw ParameterError("config: table file does not exist: " + table);
    }
}

HamiltonianModel AuditConfig::build_model() const {
    validate();
    const auto make_base = [&](const std::string& which, double t_span) {
        if (which == "table") return load_sample_table_file(table);
        return build_spin_half(SpinHalfParams{omega0, omega, theta}, t_span);
    };

    if (model == "counterexample-b") {
        if (T != 1.0) throw ParameterError("config: rescale the counterexample base, not the pair (set T=1)");
        return build_counterexample_b(make_base(base, tmax), build_grid());
    }

    HamiltonianModel m = make_base(model, T != 1.0 ? 1.0 : tmax);
    if (T != 1.0) {
        // A non-unit T reads the model as s-parametrized on [0, 1].
        m = rescale(m, T);
    }
    return m;
}

TimeGrid AuditConfig::build_grid() const {
    const double span = T != 1.0 ? T : tmax;
    int n = steps;
    if (n % 2 != 0) ++n;  // keep the half-resolution coefficient route available
    return TimeGrid::uniform(span, n);
}

void apply_config_line(AuditConfig& config, const std::string& key, const std::string& value) {
    const auto as_double = [&](const char* name) {
        try {
            return std::stod(value);
        } catch (const std::exception&) {
            throw FormatError(std::string("config: cannot parse ") + name + " value '" + value + "'");
        }
    };
    const auto as_int = [&](const char* name) {
        try {
            return std::stoi(value);
        } catch (const std::exception&) {
            throw FormatError(std::string("config: cannot parse ") + name + " value '" + value + "'");
        }
    };

    if (key == "model") config.model = value;
    else if (key == "omega0") config.omega0 = as_double("omega0");
    else if (key == "omega") config.omega = as_double("omega");
    else if (key == "theta") config.theta = as_double("theta");
    else if (key == "tmax") config.tmax = as_double("tmax");
    else if (key == "steps") config.steps = as_int("steps");
    else if (key == "n_index") config.n_index = as_int("n_index");
    else if (key == "epsilon") config.epsilon = as_double("epsilon");
    else if (key == "T") config.T = as_double("T");
    else if (key == "table") config.table = value;
    else if (key == "base") config.base = value;
    else throw FormatError("config: unknown key '" + key + "'");
}

AuditConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config file: " + path);
    AuditConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

}  // namespace adiaudit
