#include "mbqes/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace mbqes {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

long to_long(const Rational& x) {
  if (!is_integer(x)) throw std::domain_error("expected an integer, got " + to_string(x));
  if (!x.get_num().fits_slong_p()) throw std::domain_error("integer out of range: " + to_string(x));
  return x.get_num().get_si();
}

Integer floor(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    }
  }
  std::string digits(s.front() == '+' ? s.substr(1) : s);
  return Integer(digits, 10);
}

Integer pow10(unsigned long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, e);
  return p;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    Integer ev = parse_integer(s.substr(e + 1), whole);
    if (!ev.fits_slong_p() || abs(ev) > 4096) {
      throw std::invalid_argument("exponent out of range in '" + std::string(whole) + "'");
    }
    exponent = ev.get_si();
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : s) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else {
      throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  Rational value{Integer(digits, 10)};
  if (exponent > 0) value *= pow10(static_cast<unsigned long>(exponent));
  if (exponent < 0) value /= pow10(static_cast<unsigned long>(-exponent));
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)), text);
    Integer den = parse_integer(trim(s.substr(slash + 1)), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  return parse_decimal(s, text);
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  if (trim(text).empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto comma = text.find(',', pos);
    out.push_back(parse_rational(text.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace mbqes
