#include "osc/error.hpp"

namespace osc {

std::string_view errc_name(Errc code)
{
    switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::LabelLengthMismatch: return "LabelLengthMismatch";
    case Errc::TooSmall: return "TooSmall";
    case Errc::ConstantRow: return "ConstantRow";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::AllZero: return "AllZero";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::Empty: return "Empty";
    case Errc::TooFew: return "TooFew";
    case Errc::InfeasibleDims: return "InfeasibleDims";
    case Errc::NotEnoughCategories: return "NotEnoughCategories";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::Parse: return "Parse";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& detail, std::vector<std::size_t> indices)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
      code_(code),
      detail_(detail),
      indices_(std::move(indices))
{
}

}  // namespace osc
