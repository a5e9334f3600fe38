#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace sched {

// Exact rational number. All simulation time arithmetic goes through this
// type; there is no floating point anywhere in the scheduling logic.
// boost keeps values normalized (lowest terms, positive denominator).
// Expression templates are off so arithmetic yields plain values.
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string to_frac(const Rat& r);

// Parses "p" or "p/q" with arbitrary-precision integers. Rejects anything
// else (floats, empty strings, zero or negative denominators).
std::optional<Rat> try_parse_frac(const std::string& s);

// Same as try_parse_frac but throws std::invalid_argument with the
// offending text on failure.
Rat parse_frac(const std::string& s);

double to_double(const Rat& r);

}  // namespace sched
