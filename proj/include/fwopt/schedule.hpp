#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace fwopt {

/// A scalar sequence indexed by the step t >= 1 (step sizes, momentum weights).
class Schedule {
public:
    enum class Kind { constant, cosine, custom };

    Schedule() = default;

    static Schedule constant(double value);
    /// Cosine decay from `max` at t = 1 to `min` at t = horizon, held at `min` afterwards.
    static Schedule cosine(double max, double min, std::size_t horizon);
    static Schedule custom(std::function<double(std::size_t)> fn, std::string label = "custom");

    double at(std::size_t t) const;

    /// Same sequence multiplied by c.
    Schedule scaled(double c) const;

    Kind kind() const noexcept { return kind_; }
    /// Largest value over t >= 1; only meaningful for constant and cosine schedules.
    double max_value() const;
    double min_value() const;
    bool bounded_known() const noexcept { return kind_ != Kind::custom; }

    std::string describe() const;

private:
    Kind kind_ = Kind::constant;
    double a_ = 0.0; // constant value or cosine max
    double b_ = 0.0; // cosine min
    std::size_t horizon_ = 1;
    double scale_ = 1.0;
    std::function<double(std::size_t)> fn_;
    std::string label_;
};

} // namespace fwopt
