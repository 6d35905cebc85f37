#include "genaudit/scalar.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace genaudit {

Rational rational_from_decimal(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("rational_from_decimal: non-finite value");
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) {
    throw std::invalid_argument("rational_from_decimal: formatting failed");
  }
  std::string_view text(buf, static_cast<std::size_t>(end - buf));

  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    exponent = std::stol(std::string(text.substr(e + 1)));
    text = text.substr(0, e);
  }
  std::string digits;
  for (char c : text) {
    if (c == '.') {
      continue;
    }
    digits.push_back(c);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    exponent -= static_cast<long>(text.size() - dot - 1);
  }

  mpz_class numerator(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r;
  if (exponent >= 0) {
    r = Rational(numerator * scale);
  } else {
    r = Rational(numerator, scale);
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string ScalarOps<double>::str(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

}  // namespace genaudit
