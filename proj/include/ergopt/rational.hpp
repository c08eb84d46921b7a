#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ergopt {

// Exact rational scalar. All finite-system weights are kept as rationals so
// that minimizing values, potentials and Birkhoff sums compare without
// tolerances.
using Rat = mpq_class;

/// Parses a decimal literal ("-3", "0.125", "1e-3", "2.5E2") or a fraction
/// ("3/4") into an exact rational. Throws std::invalid_argument on malformed
/// input.
Rat rat_from_decimal(std::string_view text);

/// Converts a finite double to the rational equal to its shortest
/// round-tripping decimal representation. A JSON weight written as 1.1
/// becomes exactly 11/10, not the underlying binary fraction.
Rat rat_from_double(double value);

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string rat_to_string(const Rat& r);

double rat_to_double(const Rat& r);

/// Shortest round-trip decimal formatting for doubles; used everywhere a
/// float is written to CSV/JSON so identical inputs give identical bytes.
std::string format_double(double value);

}  // namespace ergopt
