#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lle {

// Bad input: out-of-range parameter, malformed descriptor, violated precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that was well posed on entry but failed numerically
// (zero pivot, poor fit, too many rejected samples).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation hit a branch point or pole of a conformal map.
class SingularityError : public NumericalError {
public:
    explicit SingularityError(const std::string& what, std::size_t event_index = npos)
        : NumericalError(what), event_index_(event_index) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t event_index() const noexcept { return event_index_; }

private:
    std::size_t event_index_;
};

class PivotError : public NumericalError {
public:
    PivotError(int i, int j)
        : NumericalError("zero pivot in moment recurrence at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")"),
          i_(i), j_(j) {}

    int i() const noexcept { return i_; }
    int j() const noexcept { return j_; }

private:
    int i_;
    int j_;
};

}  // namespace lle
