#include "tangle/rational.hpp"

#include <charconv>

namespace tangle {

std::string rat_str(const Rat& r) {
  std::string n = numerator(r).str();
  if (denominator(r) == 1) return n;
  return n + "/" + denominator(r).str();
}

std::optional<Rat> parse_rat(std::string_view s) {
  if (s.empty()) return std::nullopt;
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    if (!is_int(s)) return std::nullopt;
    return Rat(Int(std::string(s)));
  }
  auto num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!is_int(num) || !is_int(den)) return std::nullopt;
  Int d{std::string(den)};
  if (d == 0) return std::nullopt;
  return Rat(Int(std::string(num)), d);
}

Rat rat_pow(const Rat& base, unsigned exp) {
  Rat acc = 1, b = base;
  while (exp) {
    if (exp & 1) acc *= b;
    b *= b;
    exp >>= 1;
  }
  return acc;
}

double rat_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace tangle
