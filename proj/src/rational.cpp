#include "derivcheck/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace derivcheck {

namespace {

using boost::multiprecision::mpz_int;

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

mpz_int to_integer(std::string_view digits) { return mpz_int(std::string(digits)); }

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
    }
    mpz_int d = to_integer(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Rational(to_integer(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    mpz_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_int numer = (whole.empty() ? mpz_int(0) : to_integer(whole)) * scale + to_integer(frac);
    result = Rational(numer, scale);
  } else {
    if (!all_digits(body)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    result = Rational(to_integer(body));
  }
  return negative ? Rational(-result) : result;
}

bool is_integer(const Rational& value) { return denominator(value) == 1; }

std::string format_rational(const Rational& value) {
  mpz_int num = numerator(value);
  mpz_int den = denominator(value);
  if (den == 1) return num.str();

  mpz_int rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return num.str() + "/" + den.str();

  const int places = std::max(twos, fives);
  mpz_int scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = num < 0;
  mpz_int scaled = (negative ? mpz_int(-num) : num) * scale / den;
  std::string digits = scaled.str();
  if (digits.size() <= static_cast<std::size_t>(places)) {
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  return negative ? "-" + digits : digits;
}

std::vector<Rational> sorted_values(std::vector<Rational> values) {
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace derivcheck
