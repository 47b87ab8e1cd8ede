#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmg {

// Exact rational scalar. All polyhedral work in the two-buyer layer runs on
// this type; the market solver works in double and converts exactly when it
// needs to cross over (every double is a dyadic rational).
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline double toDouble(const Rat& r) { return r.convert_to<double>(); }

inline Rat ratAbs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Parses "p/q", plain integers and decimal literals ("3", "-7/2", "0.25",
// "1e-3") into an exact rational.
Rat parseRational(const std::string& text);

// Canonical text form: integer when the denominator is 1, "p/q" otherwise.
std::string formatRational(const Rat& r);

// Generic numeric traits so the simplex core can run on double or Rat.
template <class T>
struct NumTraits;

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static double pivotEps() { return 1e-11; }
  static double zero() { return 0.0; }
  static double abs(double v) { return v < 0 ? -v : v; }
};

template <>
struct NumTraits<Rat> {
  static constexpr bool exact = true;
  static Rat pivotEps() { return Rat(0); }
  static Rat zero() { return Rat(0); }
  static Rat abs(const Rat& v) { return ratAbs(v); }
};

}  // namespace fmg
