#include "dendrite/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <cstdlib>
#include <limits>

#include "dendrite/errors.hpp"

namespace dendrite {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ValidationError("empty rational");
  try {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw ValidationError("bad rational: " + s);
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::size_t decimals = s.size() - dot - 1;
      if (digits.empty() || digits == "-") throw ValidationError("bad rational: " + s);
      mpz_class num(digits, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, decimals);
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    Rational q(s, 10);
    if (q.get_den() == 0) throw ValidationError("zero denominator: " + s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ValidationError("bad rational: " + s);
  }
}

Rational pow2(int e) {
  Rational q(1);
  if (e >= 0)
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return q;
}

double to_double(const Rational& q) {
  double t = q.get_d();
  if (!std::isfinite(t) || Rational(t) == q) return t;
  double away = std::nextafter(t, q > 0 ? HUGE_VAL : -HUGE_VAL);
  Rational dt = abs(q - Rational(t)), da = abs(Rational(away) - q);
  if (dt != da) return dt < da ? t : away;
  std::int64_t bits;
  std::memcpy(&bits, &t, sizeof bits);
  return (bits & 1) == 0 ? t : away;
}

Rational power(const Rational& base, int e) {
  Rational b = e >= 0 ? base : Rational(1) / base;
  unsigned k = static_cast<unsigned>(e >= 0 ? e : -e);
  Rational out(1);
  while (k) {
    if (k & 1u) out *= b;
    b *= b;
    k >>= 1u;
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {
int& level_cap() {
  static int cap = [] {
    if (const char* env = std::getenv("DENDRITE_MAX_LEVEL")) {
      int v = 0;
      auto sv = std::string_view(env);
      auto r = std::from_chars(sv.data(), sv.data() + sv.size(), v);
      if (r.ec == std::errc() && v >= 0) return v;
    }
    return 12;
  }();
  return cap;
}
}  // namespace

int max_level() { return level_cap(); }
void set_max_level(int level) {
  if (level < 0) throw ValidationError("max_level must be non-negative");
  level_cap() = level;
}
void check_level(int level) {
  if (level < 0) throw ValidationError("negative level");
  if (level > max_level())
    throw CapacityError("level " + std::to_string(level) + " exceeds max_level " +
                        std::to_string(max_level()));
}

}  // namespace dendrite
