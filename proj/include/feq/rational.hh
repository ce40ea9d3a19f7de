// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace feq {

/// Exact rational number. mpq_class keeps values canonical once
/// canonicalize() has run; every helper here returns canonical values.
using Q = mpq_class;

Q make_q(long num, long den = 1);

/// Parses "3", "-7/2" or a decimal literal such as "1.25". Throws
/// std::invalid_argument on malformed input or a zero denominator.
Q parse_q(std::string_view text);

std::string to_string(const Q &q);

inline bool is_integer(const Q &q) { return q.get_den() == 1; }

/// Exact square root when q is the square of a rational.
bool rational_sqrt(const Q &q, Q &root);

} // namespace feq
