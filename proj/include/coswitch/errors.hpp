#pragma once

#include <stdexcept>
#include <string>

namespace coswitch {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveInput : Error {
    explicit NonPositiveInput(const std::string& what) : Error(what) {}
};

struct NonPositiveCurrent : NonPositiveInput {
    explicit NonPositiveCurrent(const std::string& what) : NonPositiveInput(what) {}
};

// SQUID inductance pole at half flux with zero junction asymmetry.
struct FluxSingularity : Error {
    explicit FluxSingularity(const std::string& what) : Error(what) {}
};

// 1/L - w^2 C crosses zero: the element has no finite inductance here.
struct SelfResonance : Error {
    explicit SelfResonance(const std::string& what) : Error(what) {}
};

struct SingularConversion : Error {
    explicit SingularConversion(const std::string& what) : Error(what) {}
};

struct DegenerateInput : Error {
    explicit DegenerateInput(const std::string& what) : Error(what) {}
};

struct NoBracket : Error {
    explicit NoBracket(const std::string& what) : Error(what) {}
};

struct NotBracketed : Error {
    explicit NotBracketed(const std::string& what) : Error(what) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

struct Infeasible : Error {
    explicit Infeasible(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& what) : Error(what) {}
};

}  // namespace coswitch
