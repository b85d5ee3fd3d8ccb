#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/rational_adaptor.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace morita {

/// Exact rational scalar. Always stored in lowest terms with positive
/// denominator; every operation in this library is exact (no tolerances
/// exist anywhere in the system).
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

using Vec = std::vector<Rat>;

struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct CompositionError : std::runtime_error {
  explicit CompositionError(const std::string& what) : std::runtime_error(what) {}
};

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Canonical wire form "p/q" with q >= 1 (always includes the denominator).
inline std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << rat_num(r) << '/' << rat_den(r);
  return os.str();
}

/// Parses "p" or "p/q". Rejects q = 0 and any trailing garbage.
inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(Int(s));
    }
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw InputError("rational with zero denominator: " + s);
    return Rat(num, den);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("malformed rational: " + s);
  }
}

inline std::vector<std::string> vec_to_strings(const Vec& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(rat_to_string(r));
  return out;
}

inline Vec vec_from_strings(const std::vector<std::string>& v) {
  Vec out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(rat_from_string(s));
  return out;
}

}  // namespace morita
