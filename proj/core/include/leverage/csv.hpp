#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "leverage/dataset.hpp"

namespace leverage {

/// Column-wise standardization parameters (mean 0, sd 1 with the n-1
/// divisor), kept so held-out data can be mapped identically.
struct Standardization {
  std::vector<std::string> feature_columns;
  std::string label_column;
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  std::optional<double> threshold;
};

struct LabeledCsv {
  Dataset data;
  Standardization standardization;
};

/// Reads a header-first CSV, takes `label_column` as the response and every
/// other column as a feature. With a threshold, label = +1 when the response
/// is strictly greater, else -1; without one the response column must
/// already hold +1/-1. Features are standardized column-wise; a constant
/// column is an error, as is any malformed row (reported with its line
/// number).
LabeledCsv load_labeled_csv(const std::filesystem::path& path,
                            const std::string& label_column,
                            std::optional<double> threshold);

/// Applies previously computed standardization to raw feature rows.
Eigen::VectorXd standardize_row(const Standardization& s,
                                const Eigen::VectorXd& raw);

/// Round-trippable dataset export: header "y,x1..xp", 17 significant digits.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// printf("%.17g") — doubles survive a write/read round trip bit-exactly.
std::string format_double(double v);

}  // namespace leverage
