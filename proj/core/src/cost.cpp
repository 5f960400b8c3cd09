#include "optbt/cost.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace optbt {

Cost Cost::parse(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("invalid cost '" + std::string(text) + "'"); };
  if (text.empty()) fail();

  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool in_frac = false;
  for (char ch : text) {
    if (ch == '.') {
      if (in_frac) fail();
      in_frac = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(ch))) fail();
    seen_digit = true;
    int d = ch - '0';
    if (in_frac) {
      if (++frac_digits > 6) fail();
      frac = frac * 10 + d;
    } else {
      if (whole > (std::numeric_limits<std::int64_t>::max() / kScale - d) / 10) fail();
      whole = whole * 10 + d;
    }
  }
  if (!seen_digit) fail();
  for (int i = frac_digits; i < 6; ++i) frac *= 10;
  return Cost(whole * kScale + frac);
}

std::string Cost::str() const {
  std::int64_t whole = units_ / kScale;
  std::int64_t frac = units_ % kScale;
  if (units_ < 0) return "-" + Cost(-units_).str();
  std::string out = std::to_string(whole);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 6 - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

std::string to_string(const MaybeCost& cost) { return cost ? cost->str() : "infeasible"; }

}  // namespace optbt
