#pragma once

#include "osc/matrix.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <span>

namespace osc::io {

/// Comma-separated numeric rows, one sample per line. A single leading header
/// line is skipped when every one of its fields is non-numeric. Blank lines
/// are ignored; LF and CRLF endings are both accepted.
/// Throws Error{Parse} on ragged rows or unparseable fields.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// One integer per line.
Labels read_labels(std::istream& in);
Labels read_labels(const std::filesystem::path& path);

DataMatrix load_dataset(const std::filesystem::path& matrix_path,
                        const std::optional<std::filesystem::path>& labels_path);

void write_labels(const std::filesystem::path& path, std::span<const int> labels);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Two columns: iteration (1-based), objective.
void write_trace_csv(const std::filesystem::path& path, std::span<const double> trace);

}  // namespace osc::io
