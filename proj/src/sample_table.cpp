#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "adiaudit/errors.hpp"
#include "adiaudit/hamiltonians.hpp"
#include "adiaudit/report_io.hpp"

namespace adiaudit {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    std::ostringstream msg;
    msg << "sample table, line " << line_no << ": " << what;
    throw FormatError(msg.str());
}

bool next_line(std::istream& in, std::string& line, int& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;  // blank
        if (line[pos] == '#') continue;
        return true;
    }
    return false;
}

Complex parse_entry(const std::string& token, int line_no) {
    const auto comma = token.find(',');
    if (comma == std::string::npos) fail(line_no, "entry '" + token + "' is not a re,im pair");
    try {
        const double re = std::stod(token.substr(0, comma));
        const double im = std::stod(token.substr(comma + 1));
        return {re, im};
    } catch (const std::exception&) {
        fail(line_no, "cannot parse entry '" + token + "'");
    }
}

}  // namespace

HamiltonianModel load_sample_table(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!next_line(in, line, line_no)) throw FormatError("sample table: empty stream");

    std::istringstream header(line);
    std::string kw_n, kw_samples;
    int dim = 0, count = 0;
    header >> kw_n >> dim >> kw_samples >> count;
    if (header.fail() || kw_n != "N" || kw_samples != "SAMPLES") {
        fail(line_no, "expected header 'N <dim> SAMPLES <count>'");
    }
    if (dim < 2) fail(line_no, "dimension must be at least 2");
    if (count < 2) fail(line_no, "need at least 2 samples");

    MatrixSampleTable table;
    table.times.reserve(count);
    table.matrices.reserve(count);
    for (int s = 0; s < count; ++s) {
        if (!next_line(in, line, line_no)) fail(line_no, "unexpected end of stream before sample " + std::to_string(s));
        std::istringstream ts(line);
        std::string kw_t;
        double t = 0.0;
        ts >> kw_t >> t;
        if (ts.fail() || kw_t != "t") fail(line_no, "expected 't <time>'");

        Matrix m(dim, dim);
        for (int r = 0; r < dim; ++r) {
            if (!next_line(in, line, line_no)) fail(line_no, "unexpected end of stream inside matrix");
            std::istringstream row(line);
            std::string token;
            for (int c = 0; c < dim; ++c) {
                if (!(row >> token)) fail(line_no, "row has fewer than " + std::to_string(dim) + " entries");
                m(r, c) = parse_entry(token, line_no);
            }
            if (row >> token) fail(line_no, "row has more than " + std::to_string(dim) + " entries");
        }
        table.times.push_back(t);
        table.matrices.push_back(std::move(m));
    }
    return HamiltonianModel::from_table(std::move(table));
}

HamiltonianModel load_sample_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open sample table file: " + path);
    return load_sample_table(in);
}

void write_sample_table(const MatrixSampleTable& table, std::ostream& out) {
    const int dim = table.dimension();
    out << "N " << dim << " SAMPLES " << table.times.size() << "\n";
    for (std::size_t s = 0; s < table.times.size(); ++s) {
        out << "t " << format_double(table.times[s]) << "\n";
        const Matrix& m = table.matrices[s];
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                if (c) out << ' ';
                out << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
            }
            out << "\n";
        }
    }
}

}  // namespace adiaudit
