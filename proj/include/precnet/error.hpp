#pragma once

#include <stdexcept>
#include <string>

namespace precnet {

// Every library failure derives from Error; kind() is the stable name used in
// CLI diagnostics ("precnet: error[NotPositiveDefinite]: ...").
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PRECNET_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(#Name, what) {}     \
    }

PRECNET_DEFINE_ERROR(NotPositiveDefinite);
PRECNET_DEFINE_ERROR(DimensionMismatch);
PRECNET_DEFINE_ERROR(InvalidWeight);
PRECNET_DEFINE_ERROR(InvalidParameter);
PRECNET_DEFINE_ERROR(DegenerateFold);
PRECNET_DEFINE_ERROR(EmptyInput);
PRECNET_DEFINE_ERROR(DegenerateClass);
PRECNET_DEFINE_ERROR(DegenerateGeometry);
PRECNET_DEFINE_ERROR(NegativeCount);
PRECNET_DEFINE_ERROR(ParseError);
PRECNET_DEFINE_ERROR(ConfigError);

#undef PRECNET_DEFINE_ERROR

}  // namespace precnet
