#ifndef HYLL_RATIONAL_HPP
#define HYLL_RATIONAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace hyll {

// Exact rational arithmetic for world payloads and rate constants.
// Proof checking and world matching compare these bit-stably; floating
// point appears only in the simulator's sampled delays.
using Rational = boost::rational<std::int64_t>;

inline Rational rat(std::int64_t num, std::int64_t den = 1) { return Rational(num, den); }

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r);

// Accepts "p", "p/q" and decimal literals like "1.5" or ".25".
std::optional<Rational> parse_rational(const std::string& text);

}  // namespace hyll

#endif
