#include "cvxclust/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cvxclust::io {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool parse_number(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

Dataset parse_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_number(fields[c], row[c])) numeric = false;
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw std::invalid_argument("non-numeric value on line " + std::to_string(line_no));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + " has " +
                                  std::to_string(row.size()) + " columns, expected " +
                                  std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("CSV contains no data rows");
  Matrix points(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) points(i, c) = rows[i][c];
  }
  return Dataset(std::move(points));
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return parse_csv(in);
}

void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& header) {
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(i, c));
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& header) {
  auto out = open_out(path);
  write_matrix_csv(out, m, header);
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  out << "label\n";
  for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<int> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      if (first) {
        first = false;
        continue;
      }
      throw std::invalid_argument("bad label '" + t + "'");
    }
    first = false;
    labels.push_back(value);
  }
  return labels;
}

void write_path_csv(const std::filesystem::path& path, const LambdaPath& lambda_path) {
  auto out = open_out(path);
  out << "lambda,k,converged,objective\n";
  for (const auto& e : lambda_path.entries) {
    out << format_double(e.lambda) << ',' << e.k << ',' << (e.converged ? 1 : 0) << ','
        << format_double(e.objective) << '\n';
  }
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Partition& partition) {
  return {{"labels", partition.labels()},
          {"centroids", to_json(partition.centroids())},
          {"k", partition.k()},
          {"sizes", partition.sizes()}};
}

json to_json(const std::vector<BoundingBall>& balls) {
  json out = json::array();
  for (const auto& b : balls) {
    out.push_back({{"cluster_index", b.cluster_index},
                   {"center", std::vector<double>(b.center.data(), b.center.data() + b.center.size())},
                   {"radius", b.radius}});
  }
  return out;
}

json to_json(const CertCheck& check) {
  return {{"name", check.name},
          {"pass", check.pass},
          {"margin", check.margin},
          {"witness_indices", check.witness_indices}};
}

json to_json(const CertReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back(to_json(c));
  return {{"all_pass", report.all_pass()}, {"checks", std::move(checks)}};
}

json to_json(const SolverConfig& config) {
  json j = {{"lambda", config.lambda},       {"primal_tol", config.primal_tol},
            {"dual_tol", config.dual_tol},   {"max_iters", config.max_iters},
            {"admm_rho", config.admm_rho},   {"seed", config.seed},
            {"polish", config.polish}};
  j["fuse_tol"] = config.fuse_tol ? json(*config.fuse_tol) : json(nullptr);
  return j;
}

Partition partition_from_json(const json& j) {
  const auto labels = j.at("labels").get<std::vector<int>>();
  const auto rows = j.at("centroids").get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw std::invalid_argument("partition has no centroids");
  Matrix centroids(rows.size(), rows.front().size());
  for (std::size_t l = 0; l < rows.size(); ++l) {
    if (rows[l].size() != rows.front().size()) throw std::invalid_argument("ragged centroids");
    for (std::size_t c = 0; c < rows[l].size(); ++c) centroids(l, c) = rows[l][c];
  }
  return Partition(labels, std::move(centroids));
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace cvxclust::io
