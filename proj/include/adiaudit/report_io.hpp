#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "adiaudit/criteria.hpp"
#include "adiaudit/dynamics.hpp"

namespace adiaudit {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

nlohmann::json report_to_json(const CriterionReport& report);
nlohmann::json constant_case_to_json(const ConstantCaseSolution& solution);

/// Columns: t, A_inst, B_cum, C_cum, bound_rhs (sums over branches/pairs).
void write_report_csv(const CriterionReport& report, std::ostream& out);

/// Columns: t, Re/Im of each c_m, F, 1-F, bound_rhs. The bound may be empty.
void write_timeseries_csv(const EvolutionResult& evolution, const RealVector& bound, std::ostream& out);

}  // namespace adiaudit
