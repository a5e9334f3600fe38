#include "sched/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace sched {

std::string to_frac(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += "/";
    s += denominator(r).str();
  }
  return s;
}

namespace {

bool is_integer_token(const std::string& s, std::size_t begin, std::size_t end) {
  if (begin >= end) return false;
  std::size_t i = begin;
  if (s[i] == '+' || s[i] == '-') ++i;
  if (i >= end) return false;
  for (; i < end; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rat> try_parse_frac(const std::string& s) {
  const std::size_t slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(s, 0, s.size())) return std::nullopt;
    return Rat(BigInt(s));
  }
  if (!is_integer_token(s, 0, slash) || !is_integer_token(s, slash + 1, s.size())) {
    return std::nullopt;
  }
  BigInt num(s.substr(0, slash));
  BigInt den(s.substr(slash + 1));
  if (den <= 0) return std::nullopt;
  return Rat(num, den);
}

Rat parse_frac(const std::string& s) {
  auto r = try_parse_frac(s);
  if (!r) throw std::invalid_argument("not a rational \"p/q\": '" + s + "'");
  return *r;
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace sched
