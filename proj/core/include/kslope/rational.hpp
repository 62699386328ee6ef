#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace kslope {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

/// "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& r);

}  // namespace kslope
