#pragma once

#include <stdexcept>
#include <string>

namespace wdt {

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct SingularIntegrand : std::runtime_error {
    explicit SingularIntegrand(const std::string& what) : std::runtime_error(what) {}
};

struct RecursionBreakdown : std::runtime_error {
    explicit RecursionBreakdown(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionTooLarge : std::runtime_error {
    explicit DimensionTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct SizeMismatch : std::runtime_error {
    explicit SizeMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NegativeVariance : std::runtime_error {
    explicit NegativeVariance(const std::string& what) : std::runtime_error(what) {}
};

struct NonPositiveData : std::runtime_error {
    explicit NonPositiveData(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateAbscissa : std::runtime_error {
    explicit DegenerateAbscissa(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientPoints : std::runtime_error {
    explicit InsufficientPoints(const std::string& what) : std::runtime_error(what) {}
};

struct WindowEmpty : std::runtime_error {
    explicit WindowEmpty(const std::string& what) : std::runtime_error(what) {}
};

struct IoFailure : std::runtime_error {
    explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};

struct VersionConflict : std::runtime_error {
    explicit VersionConflict(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wdt
