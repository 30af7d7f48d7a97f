#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace mandelq::cli {

/// Shortest decimal string that round-trips to the same double; negative zero
/// folds to "0" so equal values always serialize identically.
std::string format_real(double x);

/// "re+imi" with both parts through format_real, e.g. "1.5-0.25i".
std::string format_complex(std::complex<double> z);

/// Accepts "re", "re+imi", "re-imi", "imi", "i", "-i" and "re,im".
/// Throws ParseError on anything else.
std::complex<double> parse_complex(std::string_view text);

/// Whole-token floating-point parse; throws ParseError on trailing garbage.
double parse_real(std::string_view text);

}  // namespace mandelq::cli
