#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>

namespace dendrite {

// Finite address over {0,1,2,3}; the empty word is the whole space.
class Word {
 public:
  Word() = default;
  // Digits '0'..'3'; "-" and "" both give the empty word.
  explicit Word(std::string_view digits);
  static Word repeat(int digit, std::size_t times);

  std::size_t size() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  int operator[](std::size_t i) const { return digits_[i] - '0'; }
  int back() const { return digits_.back() - '0'; }

  Word& push_back(int digit);
  void pop_back() { digits_.pop_back(); }
  Word operator+(const Word& tail) const;
  Word& operator+=(const Word& tail);

  Word prefix(std::size_t n) const { return from_raw(digits_.substr(0, n)); }
  Word suffix(std::size_t from) const { return from_raw(digits_.substr(from)); }
  bool is_prefix_of(const Word& other) const;
  // Only digits from `allowed` (a string such as "01").
  bool all_in(std::string_view allowed) const;
  std::size_t common_prefix_length(const Word& other) const;

  const std::string& digits() const { return digits_; }
  // Serialised form, "-" for the empty word.
  std::string str() const { return digits_.empty() ? "-" : digits_; }

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

 private:
  static Word from_raw(std::string s) {
    Word w;
    w.digits_ = std::move(s);
    return w;
  }
  std::string digits_;
};

enum class Corner : std::uint8_t { Q1 = 1, Q2 = 2, Q3 = 3 };

int corner_index(Corner c);  // 1..3
Corner corner_from_index(int j);

// Canonical lattice point. Only canonicalize() and parse() produce these.
struct VertexId {
  Word word;
  Corner corner = Corner::Q1;

  std::string str() const;  // "word:corner"
  static VertexId parse(std::string_view text);

  auto operator<=>(const VertexId&) const = default;
  bool operator==(const VertexId&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

Point corner_point(Corner c);
// F_w(p) = F_{w_1} o ... o F_{w_k}(p).
Point apply_map(const Word& w, Point p);
Point coordinates(const Word& w, Corner c);
Point coordinates(const VertexId& v);

VertexId canonicalize(const Word& w, Corner c);

// Named lattice points.
VertexId q1();
VertexId q2();
VertexId q3();
VertexId q0();  // F_0(q_2) = F_2(q_1)

// Reflection swapping 0<->1 and 2<->3 (and q_2<->q_3).
Word reflect(const Word& w);
VertexId reflect(const VertexId& v);

// Whether v lies in F_psi(C), C the bottom Cantor set pi({2,3}^inf).
bool in_cantor_piece(const VertexId& v, const Word& psi);

struct Disjoint {
  bool operator==(const Disjoint&) const = default;
};
struct Nested {
  Word ancestor;
  bool operator==(const Nested&) const = default;
};
struct PointContact {
  VertexId point;
  bool operator==(const PointContact&) const = default;
};
using IntersectionKind = std::variant<Disjoint, Nested, PointContact>;

IntersectionKind cell_intersection(const Word& a, const Word& b);

}  // namespace dendrite

template <>
struct std::hash<dendrite::Word> {
  std::size_t operator()(const dendrite::Word& w) const noexcept {
    return std::hash<std::string>{}(w.digits());
  }
};

template <>
struct std::hash<dendrite::VertexId> {
  std::size_t operator()(const dendrite::VertexId& v) const noexcept {
    return std::hash<std::string>{}(v.word.digits()) * 4u + static_cast<std::size_t>(v.corner);
  }
};
