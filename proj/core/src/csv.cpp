#include "leverage/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leverage {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, long line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("csv: malformed number '" + s + "' at line " +
                             std::to_string(line_no));
  }
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

LabeledCsv load_labeled_csv(const std::filesystem::path& path,
                            const std::string& label_column,
                            std::optional<double> threshold) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("csv: empty file " + path.string());
  std::vector<std::string> header = split_csv_line(line);
  for (std::string& h : header) h = strip(h);

  Eigen::Index label_col = -1;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == label_column) label_col = static_cast<Eigen::Index>(j);
  if (label_col < 0)
    throw std::runtime_error("csv: missing label column '" + label_column +
                             "' in " + path.string());
  const Eigen::Index p = static_cast<Eigen::Index>(header.size()) - 1;
  if (p < 1) throw std::runtime_error("csv: no feature columns");

  std::vector<double> responses;
  std::vector<double> values;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<Eigen::Index>(fields.size()) != p + 1)
      throw std::runtime_error("csv: wrong field count at line " +
                               std::to_string(line_no));
    for (Eigen::Index j = 0; j < p + 1; ++j) {
      const double v = parse_double(fields[static_cast<std::size_t>(j)], line_no);
      if (j == label_col)
        responses.push_back(v);
      else
        values.push_back(v);
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(responses.size());
  if (n < 1) throw std::runtime_error("csv: no data rows in " + path.string());

  RowMatrixXd x = Eigen::Map<RowMatrixXd>(values.data(), n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = responses[static_cast<std::size_t>(i)];
    if (threshold) {
      y[i] = r > *threshold ? 1.0 : -1.0;
    } else {
      if (r != 1.0 && r != -1.0)
        throw std::runtime_error(
            "csv: label column must be +1/-1 when no threshold is given");
      y[i] = r;
    }
  }

  Standardization st;
  st.label_column = label_column;
  st.threshold = threshold;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (static_cast<Eigen::Index>(j) != label_col)
      st.feature_columns.push_back(header[j]);
  st.mean = x.colwise().mean();
  st.sd.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double var = (x.col(j).array() - st.mean[j]).square().sum() /
                       static_cast<double>(n - 1);
    st.sd[j] = std::sqrt(var);
    if (!(st.sd[j] > 0.0))
      throw std::runtime_error("csv: constant feature column '" +
                               st.feature_columns[static_cast<std::size_t>(j)] +
                               "'");
    x.col(j) = (x.col(j).array() - st.mean[j]) / st.sd[j];
  }

  return LabeledCsv{Dataset(std::move(x), std::move(y)), std::move(st)};
}

Eigen::VectorXd standardize_row(const Standardization& s,
                                const Eigen::VectorXd& raw) {
  if (raw.size() != s.mean.size())
    throw std::invalid_argument("standardize_row: dimension mismatch");
  return (raw - s.mean).cwiseQuotient(s.sd);
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open " + path.string());
  out << "y";
  for (Eigen::Index j = 0; j < data.dim(); ++j) out << ",x" << (j + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << static_cast<int>(data.label(i));
    for (Eigen::Index j = 0; j < data.dim(); ++j)
      out << ',' << format_double(data.features()(i, j));
    out << '\n';
  }
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file");
  const Eigen::Index p = static_cast<Eigen::Index>(split_csv_line(line).size()) - 1;

  std::vector<double> values;
  std::vector<double> labels;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<Eigen::Index>(fields.size()) != p + 1)
      throw std::runtime_error("csv: wrong field count at line " +
                               std::to_string(line_no));
    labels.push_back(parse_double(fields[0], line_no));
    for (Eigen::Index j = 1; j <= p; ++j)
      values.push_back(parse_double(fields[static_cast<std::size_t>(j)], line_no));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
  RowMatrixXd x = Eigen::Map<RowMatrixXd>(values.data(), n, p);
  Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(labels.data(), n);
  return Dataset(std::move(x), std::move(y));
}

}  // namespace leverage
