#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace osc {

/// Named failure kinds surfaced by every module. The CLI prints the name
/// verbatim, so renaming one is a user-visible change.
enum class Errc {
    NonFinite,
    LabelLengthMismatch,
    TooSmall,
    ConstantRow,
    NotSymmetric,
    AllZero,
    TooFewPoints,
    LengthMismatch,
    Empty,
    TooFew,
    InfeasibleDims,
    NotEnoughCategories,
    InvalidArgument,
    Io,
    Parse,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail, std::vector<std::size_t> indices = {});

    Errc code() const noexcept { return code_; }
    std::string_view name() const noexcept { return errc_name(code_); }
    const std::string& detail() const noexcept { return detail_; }

    /// Offending positions: (row, col) for NonFinite, row list for ConstantRow.
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
    Errc code_;
    std::string detail_;
    std::vector<std::size_t> indices_;
};

}  // namespace osc
