#pragma once

#include <gmpxx.h>

#include <string>

namespace tk {

using Rational = mpq_class;

// Accepts "3", "-2/7" or a JSON integer rendered as text.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

inline int sign_of(const Rational& q) { return sgn(q); }

}  // namespace tk
