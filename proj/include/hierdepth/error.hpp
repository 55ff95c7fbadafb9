#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hierdepth {

enum class Errc {
    NotPrime,
    LatticeMismatch,
    UnsupportedLattice,
    ShapeMismatch,
    NotEffective,
    InvalidArgument,
    BadTruncation,
    VacuousTransform,
    OverlappingSupport,
    NotEnoughPoints,
    NegativeM,
    DuplicatePoint,
    EmptyMessageSpace,
    DistanceUnknown,
    ParseError,
};

constexpr std::string_view to_string(Errc e) noexcept {
    switch (e) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::LatticeMismatch: return "LatticeMismatch";
        case Errc::UnsupportedLattice: return "UnsupportedLattice";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::NotEffective: return "NotEffective";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::BadTruncation: return "BadTruncation";
        case Errc::VacuousTransform: return "VacuousTransform";
        case Errc::OverlappingSupport: return "OverlappingSupport";
        case Errc::NotEnoughPoints: return "NotEnoughPoints";
        case Errc::NegativeM: return "NegativeM";
        case Errc::DuplicatePoint: return "DuplicatePoint";
        case Errc::EmptyMessageSpace: return "EmptyMessageSpace";
        case Errc::DistanceUnknown: return "DistanceUnknown";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Domain error carrying a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace hierdepth
