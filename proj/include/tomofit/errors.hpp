#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tomofit {

/// Base class of every error thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise out-of-domain value passed to an operation.
class invalid_input : public error {
public:
    using error::error;
};

/// Four-count record with n_h + n_v = 0: no ensemble to normalize by.
class empty_ensemble : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Six-count record with a zero pair sum; the message names the basis.
class empty_basis : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Intensity record with i_total = 0.
class zero_intensity : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// All-zero T parameters: the normalizing sum of squares vanishes.
class degenerate_parameters : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Fidelity input with an eigenvalue below -1e-12.
class unphysical_input : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// The mixed-state inversion was asked for a state on (or outside) the
/// sphere, where its denominator is not positive.
class pure_state_limit : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Malformed input text; `location()` is the CSV line number or JSON record
/// index the message refers to.
class parse_error : public error {
public:
    parse_error(std::size_t location, const std::string& message)
        : error("input " + std::to_string(location) + ": " + message), location_(location) {}
    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

/// Well-formed text carrying an invalid value (negative count, non-finite
/// number, ...).
class validation_error : public error {
public:
    validation_error(std::size_t location, const std::string& message)
        : error("input " + std::to_string(location) + ": " + message), location_(location) {}
    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

/// Field set that matches none of the recognized record schemas (or more
/// than one of them).
class schema_error : public error {
public:
    using error::error;
};

/// The optimizer saw a non-finite cost value; carries the offending point.
class optimizer_abort : public error {
public:
    optimizer_abort(const std::string& message, std::vector<double> point)
        : error(message), point_(std::move(point)) {}
    const std::vector<double>& point() const noexcept { return point_; }

private:
    std::vector<double> point_;
};

}  // namespace tomofit
