#include "statnn/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "statnn/error.hpp"

namespace statnn {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

bool parse_double(const std::string& s, double& v) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto res = std::from_chars(begin, end, v);
    return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot open '" + path + "'");

    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first_content = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (!parse_double(fields[i], row[i])) {
                numeric = false;
                break;
            }
        if (!numeric) {
            if (first_content) {
                table.header = fields;
                first_content = false;
                continue;
            }
            throw Error(ErrorCategory::io, "non-numeric data row in '" + path + "': " + line);
        }
        first_content = false;
        if (!rows.empty() && rows.front().size() != row.size())
            throw Error(ErrorCategory::io, "ragged rows in '" + path + "'");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCategory::io, "no data rows in '" + path + "'");

    table.values.resize(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) table.values(i, j) = rows[i][j];
    return table;
}

void write_csv(const std::string& path, const std::string& comment,
               const std::vector<std::string>& header, const Eigen::MatrixXd& values) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCategory::io, "cannot write '" + path + "'");
    out << std::setprecision(17);
    if (!comment.empty()) out << "# " << comment << "\n";
    if (!header.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            out << header[i] << (i + 1 < header.size() ? "," : "");
        out << "\n";
    }
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            out << values(i, j) << (j + 1 < values.cols() ? "," : "");
        out << "\n";
    }
    if (!out) throw Error(ErrorCategory::io, "write failed for '" + path + "'");
}

}  // namespace statnn
