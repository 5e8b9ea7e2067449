#pragma once

#include <stdexcept>
#include <string>

namespace opuc {

// Base class for all library failures. Subtypes mirror the failure modes of
// individual operations so callers can map them onto distinct exit paths.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroMass : Error {
    explicit ZeroMass(const std::string& what) : Error(what) {}
};

struct ResolutionExceeded : Error {
    explicit ResolutionExceeded(const std::string& what) : Error(what) {}
};

struct TrivialMeasure : Error {
    explicit TrivialMeasure(const std::string& what) : Error(what) {}
};

struct NumericalBreakdown : Error {
    explicit NumericalBreakdown(const std::string& what) : Error(what) {}
};

struct DegreeMismatch : Error {
    explicit DegreeMismatch(const std::string& what) : Error(what) {}
};

struct NotUnimodular : Error {
    explicit NotUnimodular(const std::string& what) : Error(what) {}
};

struct InvalidAlpha : Error {
    explicit InvalidAlpha(const std::string& what) : Error(what) {}
};

struct BoundaryPoint : Error {
    explicit BoundaryPoint(const std::string& what) : Error(what) {}
};

struct DegenerateF : Error {
    explicit DegenerateF(const std::string& what) : Error(what) {}
};

struct SzegoConditionFails : Error {
    explicit SzegoConditionFails(const std::string& what) : Error(what) {}
};

struct ZeroWeight : Error {
    explicit ZeroWeight(const std::string& what) : Error(what) {}
};

struct LogDivergence : Error {
    explicit LogDivergence(const std::string& what) : Error(what) {}
};

struct ExtrapolationUnstable : Error {
    explicit ExtrapolationUnstable(const std::string& what) : Error(what) {}
};

struct IllConditioned : Error {
    explicit IllConditioned(const std::string& what) : Error(what) {}
};

struct ZeroDenominator : Error {
    explicit ZeroDenominator(const std::string& what) : Error(what) {}
};

struct DegenerateDenominator : Error {
    explicit DegenerateDenominator(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace opuc
