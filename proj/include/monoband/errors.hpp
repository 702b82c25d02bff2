#pragma once

#include <stdexcept>
#include <string>

namespace monoband {

// Numerical failures. All map to CLI exit code 3.
struct SingularDesign : std::runtime_error {
    explicit SingularDesign(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateMoments : std::runtime_error {
    explicit DegenerateMoments(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyDomain : std::runtime_error {
    explicit EmptyDomain(const std::string& what) : std::runtime_error(what) {}
};

struct DomainViolation : std::runtime_error {
    explicit DomainViolation(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyWeightRow : std::runtime_error {
    explicit EmptyWeightRow(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateGCV : std::runtime_error {
    explicit DegenerateGCV(const std::string& what) : std::runtime_error(what) {}
};

// Validation failures. All map to CLI exit code 2.
struct InvalidWindow : std::invalid_argument {
    explicit InvalidWindow(const std::string& what) : std::invalid_argument(what) {}
};

struct ParseError : std::invalid_argument {
    explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

struct MissingData : std::invalid_argument {
    explicit MissingData(const std::string& what) : std::invalid_argument(what) {}
};

struct TooShort : std::invalid_argument {
    explicit TooShort(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidConfig : std::invalid_argument {
    explicit InvalidConfig(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace monoband
