#pragma once

#include "tangle/rational.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace tangle {

struct KindMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <int N>
struct Mat {
  std::array<Rat, static_cast<size_t>(N) * N> e{};  // row-major

  Rat& at(int r, int c) { return e[static_cast<size_t>(r) * N + c]; }
  const Rat& at(int r, int c) const { return e[static_cast<size_t>(r) * N + c]; }

  bool operator==(const Mat&) const = default;

  static Mat identity() {
    Mat m;
    for (int i = 0; i < N; ++i) m.at(i, i) = 1;
    return m;
  }

  Mat operator+(const Mat& o) const {
    Mat r;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] + o.e[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    Mat r;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] - o.e[i];
    return r;
  }
  Mat operator*(const Mat& o) const {
    Mat r;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Rat acc = 0;
        for (int k = 0; k < N; ++k) acc += at(i, k) * o.at(k, j);
        r.at(i, j) = acc;
      }
    return r;
  }
  Mat scale(const Rat& s) const {
    Mat r;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] * s;
    return r;
  }
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

Rat det2(const Mat2& m);
Mat2 inv2(const Mat2& m);  // throws std::domain_error on det == 0
Rat det4(const Mat4& m);
Mat4 inv4(const Mat4& m);
Mat4 kron(const Mat2& a, const Mat2& b);

Mat2 pauli_a0();        // [[0,1],[1,0]]
Mat2 pauli_a1();        // [[1,0],[0,-1]]
Mat2 pauli_a0_plus_a1();
Mat2 zero2();

// Belief statistic a<True> + b<False>; a + b need not equal 1.
struct Belief {
  Rat a;
  Rat b;
  bool operator==(const Belief&) const = default;
};

// Carrier element: Fox-3 residue, exact rational, exact-rational matrix,
// or a belief statistic (beliefnet networks reuse the diagram format).
class Colour {
 public:
  enum class Kind { Fox3, Rational, Mat2, Mat4, Belief };

  Colour() : v_(Rat(0)) {}
  static Colour fox3(int r) { return Colour(Fox3Tag{((r % 3) + 3) % 3}); }
  Colour(Rat r) : v_(std::move(r)) {}
  Colour(Mat2 m) : v_(std::move(m)) {}
  Colour(Mat4 m) : v_(std::move(m)) {}
  Colour(Belief b) : v_(std::move(b)) {}

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  int fox() const { return std::get<Fox3Tag>(v_).r; }
  const Rat& rat() const { return std::get<Rat>(v_); }
  const Mat2& m2() const { return std::get<Mat2>(v_); }
  const Mat4& m4() const { return std::get<Mat4>(v_); }
  const Belief& bel() const { return std::get<Belief>(v_); }

  bool operator==(const Colour&) const = default;

  // Total order exists only for Fox3 (0<1<2) and rationals; matrices throw.
  bool less(const Colour& o) const;

 private:
  struct Fox3Tag {
    int r;
    bool operator==(const Fox3Tag&) const = default;
  };
  Colour(Fox3Tag t) : v_(t) {}
  std::variant<Fox3Tag, Rat, Mat2, Mat4, Belief> v_;
};

// "f0".."f2", "p/q", "[[a,b],[c,d]]" (2x2 or 4x4), belief literals "a|b",
// plus aliases A0, A1, A0+A1, Z2 for the Pauli constants.
std::string colour_str(const Colour& c);
std::optional<Colour> parse_colour(std::string_view s);

// Returns the alias name if c is one of the Pauli constants, else nullopt.
std::optional<std::string> colour_alias(const Colour& c);

}  // namespace tangle
