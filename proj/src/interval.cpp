#include "mancalog/interval.hpp"

#include <stdexcept>

namespace mancalog {

WeightInterval::WeightInterval() : lo_(0), hi_(1) {}

WeightInterval WeightInterval::make(Rational lo, Rational hi, bool lo_open, bool hi_open) {
    if (lo < 0 || hi > 1)
        throw std::invalid_argument("weight interval endpoints must lie in [0,1]");
    WeightInterval v;
    if (lo > hi || (lo == hi && (lo_open || hi_open))) {
        return empty();
    }
    v.lo_ = std::move(lo);
    v.hi_ = std::move(hi);
    v.lo_open_ = lo_open;
    v.hi_open_ = hi_open;
    return v;
}

WeightInterval WeightInterval::closed(Rational lo, Rational hi) {
    return make(std::move(lo), std::move(hi), false, false);
}

WeightInterval WeightInterval::point(Rational value) {
    return closed(value, value);
}

WeightInterval WeightInterval::empty() {
    WeightInterval v;
    v.lo_ = 1;
    v.hi_ = 0;
    v.empty_ = true;
    return v;
}

const WeightInterval& WeightInterval::unit() {
    static const WeightInterval u;
    return u;
}

bool WeightInterval::is_unit() const {
    return !empty_ && !lo_open_ && !hi_open_ && lo_ == 0 && hi_ == 1;
}

bool WeightInterval::is_point() const {
    return !empty_ && lo_ == hi_;
}

const Rational& WeightInterval::lower() const {
    if (empty_)
        throw std::logic_error("lower() on empty interval");
    return lo_;
}

const Rational& WeightInterval::upper() const {
    if (empty_)
        throw std::logic_error("upper() on empty interval");
    return hi_;
}

bool WeightInterval::lower_open() const {
    if (empty_)
        throw std::logic_error("lower_open() on empty interval");
    return lo_open_;
}

bool WeightInterval::upper_open() const {
    if (empty_)
        throw std::logic_error("upper_open() on empty interval");
    return hi_open_;
}

bool WeightInterval::contains(const Rational& x) const {
    if (empty_)
        return false;
    if (x < lo_ || (x == lo_ && lo_open_))
        return false;
    if (x > hi_ || (x == hi_ && hi_open_))
        return false;
    return true;
}

std::string WeightInterval::to_string() const {
    if (empty_)
        return "empty";
    std::string s;
    s += lo_open_ ? '(' : '[';
    s += to_fraction_string(lo_);
    s += ',';
    s += to_fraction_string(hi_);
    s += hi_open_ ? ')' : ']';
    return s;
}

WeightInterval interval_intersect(const WeightInterval& a, const WeightInterval& b) {
    if (a.is_empty() || b.is_empty())
        return WeightInterval::empty();
    Rational lo;
    bool lo_open;
    if (a.lower() > b.lower()) {
        lo = a.lower();
        lo_open = a.lower_open();
    } else if (b.lower() > a.lower()) {
        lo = b.lower();
        lo_open = b.lower_open();
    } else {
        lo = a.lower();
        lo_open = a.lower_open() || b.lower_open();
    }
    Rational hi;
    bool hi_open;
    if (a.upper() < b.upper()) {
        hi = a.upper();
        hi_open = a.upper_open();
    } else if (b.upper() < a.upper()) {
        hi = b.upper();
        hi_open = b.upper_open();
    } else {
        hi = a.upper();
        hi_open = a.upper_open() || b.upper_open();
    }
    return WeightInterval::make(std::move(lo), std::move(hi), lo_open, hi_open);
}

bool interval_subseteq(const WeightInterval& a, const WeightInterval& b) {
    if (a.is_empty())
        return true;
    if (b.is_empty())
        return false;
    // b's lower endpoint must not cut into a.
    if (a.lower() < b.lower())
        return false;
    if (a.lower() == b.lower() && b.lower_open() && !a.lower_open())
        return false;
    if (a.upper() > b.upper())
        return false;
    if (a.upper() == b.upper() && b.upper_open() && !a.upper_open())
        return false;
    return true;
}

} // namespace mancalog
