#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace extcoop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Violation {
    std::string code;
    std::string message;
};

/// Raised by build_network; carries every violated invariant, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations)
        : Error(summarize(violations)), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    static std::string summarize(const std::vector<Violation>& v) {
        std::string out = "network validation failed (" + std::to_string(v.size()) + " violation";
        out += v.size() == 1 ? ")" : "s)";
        for (const auto& item : v) out += "\n  [" + item.code + "] " + item.message;
        return out;
    }

    std::vector<Violation> violations_;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class DenominatorVanishes : public Error {
public:
    using Error::Error;
};

class GradientSingular : public Error {
public:
    using Error::Error;
};

class TransformInadmissible : public Error {
public:
    using Error::Error;
};

class NonphysicalState : public Error {
public:
    using Error::Error;
};

class MassDepleted : public Error {
public:
    using Error::Error;
};

class UnorderedChain : public Error {
public:
    using Error::Error;
};

/// Malformed input document (bad JSON, unknown keys, wrong types).
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace extcoop
