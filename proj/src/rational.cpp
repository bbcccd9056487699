#include "bayan/rational.hpp"

#include <cctype>
#include <sstream>

namespace bayan {

Rational rat_pow(const Rational& base, unsigned long exp) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  // base is canonical, so num^e / den^e already is.
  return out;
}

Rational parse_rational(const std::string& text, bool strict) {
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };

  std::string num_s = text, den_s = "1";
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    num_s = text.substr(0, slash);
    den_s = text.substr(slash + 1);
  }
  if (!is_int(num_s) || !is_int(den_s))
    throw ParseError("malformed rational '" + text + "'");

  mpz_class num(num_s), den(den_s);
  if (den == 0) throw ParseError("zero denominator in '" + text + "'");
  if (strict) {
    if (den < 0) throw ParseError("negative denominator in '" + text + "'");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (den != 1 && g != 1)
      throw ParseError("rational '" + text + "' not in lowest terms");
  }
  return rat(num, den);
}

std::string rational_str(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string rational_approx(const Rational& value) {
  if (value == 0) return "0";
  mpf_class f(value, 128);
  mp_exp_t exp10 = 0;
  std::string digits = f.get_str(exp10, 10, 12);
  bool neg = false;
  if (!digits.empty() && digits[0] == '-') {
    neg = true;
    digits = digits.substr(1);
  }
  if (digits.empty()) return "0";
  std::ostringstream out;
  if (neg) out << '-';
  out << digits[0];
  if (digits.size() > 1) out << '.' << digits.substr(1);
  out << 'e' << (exp10 - 1);
  return out.str();
}

}  // namespace bayan
