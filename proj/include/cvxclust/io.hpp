#pragma once

#include "cvxclust/certify.hpp"
#include "cvxclust/core.hpp"
#include "cvxclust/hyperparam.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cvxclust::io {

using nlohmann::json;

// 17 significant digits; parses back to the same double.
std::string format_double(double value);

// One point per row, comma separated. A first row that does not parse as
// numbers is taken as a header. Blank lines are skipped.
Dataset parse_csv(std::istream& in);
Dataset read_csv(const std::filesystem::path& path);

void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& header = {});
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& header = {});

// Single-column integer labels with a "label" header.
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> read_labels_csv(const std::filesystem::path& path);

// Columns lambda, k, converged, objective.
void write_path_csv(const std::filesystem::path& path, const LambdaPath& lambda_path);

json to_json(const Matrix& m);
json to_json(const Partition& partition);
json to_json(const std::vector<BoundingBall>& balls);
json to_json(const CertCheck& check);
json to_json(const CertReport& report);
json to_json(const SolverConfig& config);

Partition partition_from_json(const json& j);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cvxclust::io
