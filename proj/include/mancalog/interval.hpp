#pragma once

#include "mancalog/rational.hpp"

#include <string>

namespace mancalog {

// A sub-interval of [0,1] with independently open or closed endpoints, or
// the empty set. All constructions canonicalize: every representation of
// the empty set compares equal, and a degenerate open interval collapses
// to empty. Comparisons are exact; there is no tolerance anywhere.
class WeightInterval {
public:
    // The full unit interval [0,1].
    WeightInterval();

    static WeightInterval closed(Rational lo, Rational hi);
    static WeightInterval make(Rational lo, Rational hi, bool lo_open, bool hi_open);
    static WeightInterval point(Rational value);
    static WeightInterval empty();
    static const WeightInterval& unit();

    bool is_empty() const { return empty_; }
    bool is_unit() const;
    bool is_point() const;

    // Endpoint accessors require a non-empty interval.
    const Rational& lower() const;
    const Rational& upper() const;
    bool lower_open() const;
    bool upper_open() const;

    bool contains(const Rational& x) const;

    friend bool operator==(const WeightInterval& a, const WeightInterval& b) {
        if (a.empty_ || b.empty_)
            return a.empty_ == b.empty_;
        return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.lo_open_ == b.lo_open_ &&
               a.hi_open_ == b.hi_open_;
    }
    friend bool operator!=(const WeightInterval& a, const WeightInterval& b) { return !(a == b); }

    std::string to_string() const;

private:
    Rational lo_;
    Rational hi_;
    bool lo_open_ = false;
    bool hi_open_ = false;
    bool empty_ = false;
};

// Exact set intersection; commutative, associative, idempotent, with [0,1]
// as the identity element.
WeightInterval interval_intersect(const WeightInterval& a, const WeightInterval& b);

// True iff a is a subset of b as a set of reals. The empty interval is a
// subset of everything.
bool interval_subseteq(const WeightInterval& a, const WeightInterval& b);

} // namespace mancalog
