#include "osc/io.hpp"

#include "osc/error.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <string>
#include <string_view>
#include <vector>

namespace osc::io {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

bool parse_double(std::string_view field, double& out)
{
    if (field.empty())
        return false;
    if (field.front() == '+')
        field.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::Io, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, "cannot write " + path.string());
    return out;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in)
{
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool seen_content = false;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty())
            continue;
        const auto fields = split_fields(body);

        std::vector<double> parsed(fields.size());
        std::size_t numeric = 0;
        for (std::size_t j = 0; j < fields.size(); ++j)
            numeric += parse_double(fields[j], parsed[j]) ? 1 : 0;

        if (!seen_content && numeric == 0) {
            seen_content = true;  // header
            continue;
        }
        seen_content = true;
        if (numeric != fields.size())
            throw Error(Errc::Parse, "non-numeric field on line " + std::to_string(line_no));
        if (cols == 0)
            cols = fields.size();
        else if (fields.size() != cols)
            throw Error(Errc::Parse, "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                         " fields, expected " + std::to_string(cols));
        values.insert(values.end(), parsed.begin(), parsed.end());
        ++rows;
    }

    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + j];
    return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path)
{
    auto in = open_in(path);
    return read_matrix_csv(in);
}

Labels read_labels(std::istream& in)
{
    Labels labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty())
            continue;
        int value = 0;
        const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
        if (ec != std::errc() || ptr != body.data() + body.size())
            throw Error(Errc::Parse, "bad label on line " + std::to_string(line_no));
        labels.push_back(value);
    }
    return labels;
}

Labels read_labels(const std::filesystem::path& path)
{
    auto in = open_in(path);
    return read_labels(in);
}

DataMatrix load_dataset(const std::filesystem::path& matrix_path,
                        const std::optional<std::filesystem::path>& labels_path)
{
    std::optional<Labels> labels;
    if (labels_path)
        labels = read_labels(*labels_path);
    return validate(read_matrix_csv(matrix_path), std::move(labels), matrix_path.stem().string());
}

void write_labels(const std::filesystem::path& path, std::span<const int> labels)
{
    auto out = open_out(path);
    for (int label : labels)
        out << label << '\n';
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m)
{
    auto out = open_out(path);
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << m(i, j);
        out << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, std::span<const double> trace)
{
    auto out = open_out(path);
    out << "iteration,objective\n" << std::setprecision(17);
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << (i + 1) << ',' << trace[i] << '\n';
}

}  // namespace osc::io
