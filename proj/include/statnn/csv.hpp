#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace statnn {

struct CsvTable {
    std::vector<std::string> header;  // empty when the file had no header row
    Eigen::MatrixXd values;
};

/// Reads a numeric CSV. Lines starting with '#' are skipped; a leading
/// non-numeric row is treated as the header.
CsvTable read_csv(const std::string& path);

/// Writes rows with an optional '#'-prefixed provenance comment first.
void write_csv(const std::string& path, const std::string& comment,
               const std::vector<std::string>& header, const Eigen::MatrixXd& values);

}  // namespace statnn
