#pragma once

#include <string>

#include "hvr2/algebra.hpp"

namespace hvr2 {

// Parses the text syntax for algebra elements: terms `E[m1,m2]`, `t[m1,m2]`,
// `K1`..`K4`, `d1`, `d2` with optional rational coefficients, joined by `+`
// or `-`, e.g. `3/2*E[1,0] - t[0,-1] + K1 - d2`. Throws std::invalid_argument
// with the offending position on malformed input.
LieElement parse_element(const std::string& text);

// Canonical rendering: terms in symbol order as `c*sym`, joined by ` + ` or
// ` - ` with the magnitude of the coefficient; the zero element prints `0`.
std::string print_element(const LieElement& x);

}  // namespace hvr2
