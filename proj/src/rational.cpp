#include "fmg/rational.hpp"

#include <cctype>

namespace fmg {

namespace {

BigInt pow10(int k) {
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

}  // namespace

Rat parseRational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt p(s.substr(0, slash));
    BigInt q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rat(p, q);
  }

  // Decimal literal with optional exponent.
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string intPart, fracPart;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) intPart.push_back(s[i++]);
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) fracPart.push_back(s[i++]);
  }
  int exp = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    exp = std::stoi(s.substr(i + 1));
    i = s.size();
  }
  if (i != s.size() || (intPart.empty() && fracPart.empty()))
    throw std::invalid_argument("bad rational literal: " + text);

  BigInt digits(intPart.empty() ? std::string("0") : intPart);
  digits = digits * pow10(static_cast<int>(fracPart.size()));
  if (!fracPart.empty()) digits += BigInt(fracPart);

  Rat r(digits, pow10(static_cast<int>(fracPart.size())));
  if (exp > 0) r *= Rat(pow10(exp));
  if (exp < 0) r /= Rat(pow10(-exp));
  return neg ? Rat(-r) : r;
}

std::string formatRational(const Rat& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace fmg
