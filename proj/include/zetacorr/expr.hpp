#pragma once

#include <string_view>

namespace zetacorr {

// Evaluates an arithmetic formula in the single variable T, e.g. "1/log(T)" or
// "0.5*T^0.25". Supports + - * / ^, unary minus, parentheses, the constants pi
// and e, and log, exp, sqrt, abs, loglog. Throws ConfigError on malformed input
// or a non-finite result.
double evaluate_formula(std::string_view text, double T);

}  // namespace zetacorr
