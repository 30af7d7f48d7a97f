#include "format.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "mandelq/errors.hpp"

namespace mandelq::cli {

namespace {

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // fold -0
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, result.ptr);
}

std::string format_complex(std::complex<double> z) {
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::string out = format_real(z.real());
  out += std::signbit(im) ? '-' : '+';
  out += format_real(std::abs(im));
  out += 'i';
  return out;
}

double parse_real(std::string_view text) {
  std::string_view token = trimmed(text);
  // from_chars rejects an explicit plus sign; accept one before a digit/point
  if (token.size() > 1 && token.front() == '+' &&
      (std::isdigit(static_cast<unsigned char>(token[1])) || token[1] == '.')) {
    token.remove_prefix(1);
  }
  double value = 0.0;
  const char* end = token.data() + token.size();
  const auto result = std::from_chars(token.data(), end, value);
  if (token.empty() || result.ec != std::errc{} || result.ptr != end) {
    throw ParseError("cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::complex<double> parse_complex(std::string_view text) {
  const std::string_view s = trimmed(text);
  if (s.empty()) throw ParseError("empty complex number");
  if (const auto comma = s.find(','); comma != std::string_view::npos) {
    return {parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1))};
  }
  if (s.back() == 'i' || s.back() == 'I') {
    const std::string_view body = s.substr(0, s.size() - 1);
    // Split before the sign of the imaginary part when a real part precedes it
    // (signs that belong to an exponent are skipped).
    for (std::size_t k = body.size(); k-- > 1;) {
      const char c = body[k];
      if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        const std::string_view im = trimmed(body.substr(k));
        double imag = 0.0;
        if (im == "+") {
          imag = 1.0;
        } else if (im == "-") {
          imag = -1.0;
        } else {
          imag = parse_real(im);
        }
        return {parse_real(body.substr(0, k)), imag};
      }
    }
    const std::string_view im = trimmed(body);
    if (im.empty() || im == "+") return {0.0, 1.0};
    if (im == "-") return {0.0, -1.0};
    return {0.0, parse_real(im)};
  }
  return {parse_real(s), 0.0};
}

}  // namespace mandelq::cli
