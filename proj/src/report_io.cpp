#include "adiaudit/report_io.hpp"

#include <charconv>
#include <ostream>
#include <system_error>

namespace adiaudit {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

nlohmann::json vector_to_json(const RealVector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

nlohmann::json columns_to_json(const RealMatrix& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(vector_to_json(m.col(c)));
    return arr;
}

nlohmann::json complex_to_json(const Complex& z) {
    return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

nlohmann::json constant_case_to_json(const ConstantCaseSolution& s) {
    nlohmann::json j;
    j["decoupled"] = s.decoupled;
    j["lambdas"] = vector_to_json(s.lambdas);
    nlohmann::json amps = nlohmann::json::array();
    for (Eigen::Index m = 0; m < s.amplitudes.rows(); ++m) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < s.amplitudes.cols(); ++k) row.push_back(complex_to_json(s.amplitudes(m, k)));
        amps.push_back(row);
    }
    j["amplitudes"] = amps;
    nlohmann::json weights = nlohmann::json::array();
    for (Eigen::Index k = 0; k < s.weights.size(); ++k) weights.push_back(complex_to_json(s.weights[k]));
    j["weights"] = weights;
    j["i_bounds"] = vector_to_json(s.i_bounds);
    j["bound_rhs"] = s.bound_rhs;
    j["initial_residual"] = s.initial_residual;
    j["min_lambda_rel"] = s.min_lambda_rel;
    j["conditioning_warning"] = s.conditioning_warning;
    return j;
}

nlohmann::json report_to_json(const CriterionReport& r) {
    nlohmann::json j;
    j["grid"] = {{"t_end", r.grid.t_end}, {"n_steps", r.grid.n_steps}};
    j["n_index"] = r.n_index;
    j["epsilon"] = r.epsilon;

    j["A"] = {{"max", r.A.max},
              {"enabled", r.enabled_A},
              {"pass", r.pass_A},
              {"values_per_branch", columns_to_json(r.A.values)}};
    j["B"] = {{"final_per_branch", vector_to_json(r.B.final_per_branch)},
              {"total", r.B.total},
              {"enabled", r.enabled_B},
              {"pass", r.pass_B},
              {"cumulative_per_branch", columns_to_json(r.B.cumulative)},
              {"cumulative_total", vector_to_json(r.B.total_cumulative)}};
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t p = 0; p < r.C.pairs.size(); ++p) {
        pairs.push_back({{"m", r.C.pairs[p].first},
                         {"l", r.C.pairs[p].second},
                         {"final", r.C.final_per_pair[static_cast<Eigen::Index>(p)]},
                         {"cumulative", vector_to_json(r.C.cumulative.col(static_cast<Eigen::Index>(p)))}});
    }
    j["C"] = {{"pairs", pairs},
              {"total", r.C.total},
              {"enabled", r.enabled_C},
              {"pass", r.pass_C},
              {"cumulative_total", vector_to_json(r.C.total_cumulative)}};
    j["strong_forms"] = {{"b_value", r.strong.b_value}, {"c_value", r.strong.c_value}};
    j["B1"] = {{"value", r.B1.value},
               {"monotonic", r.B1.monotonic},
               {"applicable", r.B1.monotonic},
               {"log_terms", vector_to_json(r.B1.log_terms)}};
    j["bound"] = {{"a_term", vector_to_json(r.bound.a_term)},
                  {"b_term", vector_to_json(r.bound.b_term)},
                  {"c_term", vector_to_json(r.bound.c_term)},
                  {"total", vector_to_json(r.bound.total)},
                  {"final", r.bound.total.size() ? r.bound.total[r.bound.total.size() - 1] : 0.0}};
    j["tau_admissible"] = r.tau_admissible;
    j["pass"] = r.pass();
    j["constancy"] = {{"gaps_constant", r.constancy.gaps_constant},
                      {"couplings_constant", r.constancy.couplings_constant},
                      {"max_gap_deviation", r.constancy.max_gap_deviation},
                      {"max_coupling_deviation", r.constancy.max_coupling_deviation}};
    if (r.constant_case) {
        j["constant_case"] = constant_case_to_json(*r.constant_case);
    } else {
        j["constant_case"] = nullptr;
    }
    if (!r.constant_case_note.empty()) j["constant_case_note"] = r.constant_case_note;
    return j;
}

void write_report_csv(const CriterionReport& r, std::ostream& out) {
    out << "t,A_inst,B_cum,C_cum,bound_rhs\n";
    for (int k = 0; k < r.grid.n_points(); ++k) {
        out << format_double(r.grid.time(k)) << ',' << format_double(r.bound.a_term[k]) << ','
            << format_double(r.bound.b_term[k]) << ',' << format_double(r.bound.c_term[k]) << ','
            << format_double(r.bound.total[k]) << "\n";
    }
}

void write_timeseries_csv(const EvolutionResult& e, const RealVector& bound, std::ostream& out) {
    const int dim = static_cast<int>(e.coefficients.cols());
    out << "t";
    for (int m = 0; m < dim; ++m) out << ",re_c_" << (m + 1) << ",im_c_" << (m + 1);
    out << ",F,infidelity";
    if (bound.size()) out << ",bound_rhs";
    out << "\n";
    for (int k = 0; k < e.grid.n_points(); ++k) {
        out << format_double(e.grid.time(k));
        for (int m = 0; m < dim; ++m) {
            out << ',' << format_double(e.coefficients(k, m).real()) << ','
                << format_double(e.coefficients(k, m).imag());
        }
        out << ',' << format_double(e.fidelity[k]) << ',' << format_double(1.0 - e.fidelity[k]);
        if (bound.size()) out << ',' << format_double(bound[k]);
        out << "\n";
    }
}

}  // namespace adiaudit
