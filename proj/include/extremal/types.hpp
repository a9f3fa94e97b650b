#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace extremal {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error hierarchy. Every failure mode named by the library contracts gets its
// own type so callers (and the experiment runner) can tell them apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// The point lies in the compact set K rather than in its exterior.
class InsideRegion : public Error {
public:
    using Error::Error;
};

class AtomOutsideRegion : public Error {
public:
    using Error::Error;
};

class InteriorAtomNotPushable : public Error {
public:
    using Error::Error;
};

class NonSzego : public Error {
public:
    using Error::Error;
};

class DegreeTooLargeForGrid : public Error {
public:
    using Error::Error;
};

class RhoTooSparse : public Error {
public:
    using Error::Error;
};

class ConfigInvalid : public Error {
public:
    ConfigInvalid(std::string field, const std::string& what)
        : Error("invalid config field '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace extremal
