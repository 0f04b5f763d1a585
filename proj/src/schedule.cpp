#include "fwopt/schedule.hpp"

#include "fwopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fwopt {

Schedule Schedule::constant(double value) {
    Schedule s;
    s.kind_ = Kind::constant;
    s.a_ = value;
    return s;
}

Schedule Schedule::cosine(double max, double min, std::size_t horizon) {
    if (horizon == 0) {
        throw Error("Schedule::cosine: horizon must be positive");
    }
    Schedule s;
    s.kind_ = Kind::cosine;
    s.a_ = max;
    s.b_ = min;
    s.horizon_ = horizon;
    return s;
}

Schedule Schedule::custom(std::function<double(std::size_t)> fn, std::string label) {
    Schedule s;
    s.kind_ = Kind::custom;
    s.fn_ = std::move(fn);
    s.label_ = std::move(label);
    return s;
}

double Schedule::at(std::size_t t) const {
    double base = 0.0;
    switch (kind_) {
    case Kind::constant: base = a_; break;
    case Kind::cosine: {
        if (horizon_ <= 1 || t >= horizon_) {
            base = t >= horizon_ && horizon_ > 1 ? b_ : a_;
            break;
        }
        const double progress = static_cast<double>(t - 1) / static_cast<double>(horizon_ - 1);
        base = b_ + 0.5 * (a_ - b_) * (1.0 + std::cos(std::numbers::pi * progress));
        break;
    }
    case Kind::custom: base = fn_(t); break;
    }
    return scale_ == 1.0 ? base : scale_ * base;
}

Schedule Schedule::scaled(double c) const {
    Schedule s = *this;
    s.scale_ *= c;
    return s;
}

double Schedule::max_value() const {
    switch (kind_) {
    case Kind::constant: return scale_ * a_;
    case Kind::cosine: return std::max(scale_ * a_, scale_ * b_);
    case Kind::custom: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double Schedule::min_value() const {
    switch (kind_) {
    case Kind::constant: return scale_ * a_;
    case Kind::cosine: return std::min(scale_ * a_, scale_ * b_);
    case Kind::custom: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string Schedule::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind_) {
    case Kind::constant: out << "constant(" << a_ << ")"; break;
    case Kind::cosine: out << "cosine(" << a_ << " -> " << b_ << " over " << horizon_ << ")"; break;
    case Kind::custom: out << label_; break;
    }
    if (scale_ != 1.0) {
        out << " * " << scale_;
    }
    return out.str();
}

} // namespace fwopt
