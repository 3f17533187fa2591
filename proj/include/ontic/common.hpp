// common.hpp
// Shared error types, default tolerances and numeric formatting helpers.

#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ontic {

// Default tolerances. Callers may override where an operation takes an
// explicit tolerance argument.
constexpr double kNormTol = 1e-12;          // state normalization
constexpr double kEffectSumTol = 1e-10;     // effects sum to identity, entrywise
constexpr double kEffectEigTol = 1e-12;     // effect eigenvalue floor
constexpr double kProbSumTol = 1e-10;       // probability vectors sum to 1
constexpr double kPhaseEqTol = 1e-10;       // phase-invariant state equality
constexpr std::size_t kDefaultDimCap = std::size_t{1} << 14;

// Error hierarchy. Every error carries a short machine-readable code used by
// the CLI when emitting error JSON.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class validation_error : public error {
public:
    explicit validation_error(const std::string& what)
        : error("validation_error", what) {}
    validation_error(std::string code, const std::string& what)
        : error(std::move(code), what) {}
};

class dimension_mismatch : public error {
public:
    explicit dimension_mismatch(const std::string& what)
        : error("dimension_mismatch", what) {}
};

class dimension_overflow : public error {
public:
    explicit dimension_overflow(const std::string& what)
        : error("dimension_overflow", what) {}
};

class missing_pair_error : public error {
public:
    explicit missing_pair_error(const std::string& what)
        : error("missing_pair", what) {}
};

class structure_error : public error {
public:
    explicit structure_error(const std::string& what)
        : error("structure_error", what) {}
};

// 17 significant digits: enough to round-trip any double.
inline std::string format17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline double clamp01(double x) {
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
}

} // namespace ontic
