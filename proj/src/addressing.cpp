#include "dendrite/addressing.hpp"

#include <cmath>

#include "dendrite/errors.hpp"

namespace dendrite {

namespace {
const double kSqrt3 = std::sqrt(3.0);

Point map_digit(int d, Point p) {
  switch (d) {
    case 0: return {2.0 / 9.0 * p.x + 8.0 / (9.0 * kSqrt3) * p.y, 2.0 / 3.0 * p.y};
    case 1: return {2.0 / 9.0 * p.x - 8.0 / (9.0 * kSqrt3) * p.y, 2.0 / 3.0 * p.y};
    case 2: return {p.x / 3.0 - 2.0 / 3.0, p.y / 3.0 - 1.0 / kSqrt3};
    default: return {p.x / 3.0 + 2.0 / 3.0, p.y / 3.0 - 1.0 / kSqrt3};
  }
}

void strip_trailing(std::string& s, std::string_view set) {
  while (!s.empty() && set.find(s.back()) != std::string_view::npos) s.pop_back();
}
}  // namespace

Word::Word(std::string_view digits) {
  if (digits == "-") return;
  for (char c : digits) {
    if (c < '0' || c > '3') throw ValidationError("bad word digit in '" + std::string(digits) + "'");
  }
  digits_.assign(digits);
}

Word Word::repeat(int digit, std::size_t times) {
  if (digit < 0 || digit > 3) throw ValidationError("bad word digit");
  return from_raw(std::string(times, static_cast<char>('0' + digit)));
}

Word& Word::push_back(int digit) {
  if (digit < 0 || digit > 3) throw ValidationError("bad word digit");
  digits_.push_back(static_cast<char>('0' + digit));
  return *this;
}

Word Word::operator+(const Word& tail) const { return from_raw(digits_ + tail.digits_); }

Word& Word::operator+=(const Word& tail) {
  digits_ += tail.digits_;
  return *this;
}

bool Word::is_prefix_of(const Word& other) const {
  return other.digits_.compare(0, digits_.size(), digits_) == 0 && digits_.size() <= other.digits_.size();
}

bool Word::all_in(std::string_view allowed) const {
  return digits_.find_first_not_of(allowed) == std::string::npos;
}

std::size_t Word::common_prefix_length(const Word& other) const {
  std::size_t n = 0;
  while (n < size() && n < other.size() && digits_[n] == other.digits_[n]) ++n;
  return n;
}

int corner_index(Corner c) { return static_cast<int>(c); }

Corner corner_from_index(int j) {
  if (j < 1 || j > 3) throw ValidationError("corner must be 1, 2 or 3");
  return static_cast<Corner>(j);
}

std::string VertexId::str() const { return word.str() + ":" + std::to_string(corner_index(corner)); }

VertexId VertexId::parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon + 2 != text.size())
    throw ValidationError("vertex must look like word:corner, got '" + std::string(text) + "'");
  int j = text[colon + 1] - '0';
  return canonicalize(Word(text.substr(0, colon)), corner_from_index(j));
}

Point corner_point(Corner c) {
  switch (c) {
    case Corner::Q1: return {0.0, 0.0};
    case Corner::Q2: return {-1.0, -kSqrt3 / 2.0};
    default: return {1.0, -kSqrt3 / 2.0};
  }
}

Point apply_map(const Word& w, Point p) {
  for (std::size_t i = w.size(); i-- > 0;) p = map_digit(w[i], p);
  return p;
}

Point coordinates(const Word& w, Corner c) { return apply_map(w, corner_point(c)); }
Point coordinates(const VertexId& v) { return coordinates(v.word, v.corner); }

// q1 is fixed by F_0 and F_1, q2 by F_2, q3 by F_3. After stripping those,
// F_{k0}(q2) = F_{k2}(q1) and F_{k1}(q3) = F_{k3}(q1) move the point to a
// q1 representation whose word ends in 2 or 3, which is already reduced.
VertexId canonicalize(const Word& w, Corner c) {
  std::string s = w.digits();
  switch (c) {
    case Corner::Q1:
      strip_trailing(s, "01");
      return {Word(s), Corner::Q1};
    case Corner::Q2:
      strip_trailing(s, "2");
      if (!s.empty() && s.back() == '0') {
        s.back() = '2';
        return {Word(s), Corner::Q1};
      }
      return {Word(s), Corner::Q2};
    default:
      strip_trailing(s, "3");
      if (!s.empty() && s.back() == '1') {
        s.back() = '3';
        return {Word(s), Corner::Q1};
      }
      return {Word(s), Corner::Q3};
  }
}

VertexId q1() { return {Word(), Corner::Q1}; }
VertexId q2() { return {Word(), Corner::Q2}; }
VertexId q3() { return {Word(), Corner::Q3}; }
VertexId q0() { return {Word("2"), Corner::Q1}; }

Word reflect(const Word& w) {
  std::string s = w.digits();
  for (char& ch : s) ch = static_cast<char>('0' + ((ch - '0') ^ 1));
  return Word(s);
}

VertexId reflect(const VertexId& v) {
  Corner c = v.corner == Corner::Q2 ? Corner::Q3 : v.corner == Corner::Q3 ? Corner::Q2 : Corner::Q1;
  return canonicalize(reflect(v.word), c);
}

bool in_cantor_piece(const VertexId& v, const Word& psi) {
  // The only address of v that can end in {2,3}^inf is base + c^inf.
  Word base;
  int c = 0;
  if (v.corner == Corner::Q1) {
    if (v.word.empty()) return false;
    base = v.word;
    base.pop_back();
    if (v.word.back() == 2) {
      base.push_back(0);
      c = 2;
    } else {
      base.push_back(1);
      c = 3;
    }
  } else {
    base = v.word;
    c = corner_index(v.corner);
  }
  for (std::size_t i = 0; i < psi.size(); ++i) {
    int d = i < base.size() ? base[i] : c;
    if (d != psi[i]) return false;
  }
  return psi.size() >= base.size() || base.suffix(psi.size()).all_in("23");
}

IntersectionKind cell_intersection(const Word& a, const Word& b) {
  if (a.is_prefix_of(b)) return Nested{a};
  if (b.is_prefix_of(a)) return Nested{b};
  std::size_t k = a.common_prefix_length(b);
  Word kappa = a.prefix(k);
  Word x = a.suffix(k);
  Word y = b.suffix(k);
  auto contact = [&](const Word& u, const Word& v) -> IntersectionKind {
    Word ut = u.suffix(1), vt = v.suffix(1);
    int du = u[0], dv = v[0];
    if (du == 2 && dv == 0 && ut.all_in("01") && vt.all_in("2"))
      return PointContact{canonicalize(kappa + Word("2"), Corner::Q1)};
    if (du == 0 && dv == 1 && ut.all_in("01") && vt.all_in("01"))
      return PointContact{canonicalize(kappa, Corner::Q1)};
    if (du == 1 && dv == 3 && ut.all_in("3") && vt.all_in("01"))
      return PointContact{canonicalize(kappa + Word("3"), Corner::Q1)};
    return Disjoint{};
  };
  IntersectionKind r = contact(x, y);
  if (std::holds_alternative<Disjoint>(r)) r = contact(y, x);
  return r;
}

}  // namespace dendrite
