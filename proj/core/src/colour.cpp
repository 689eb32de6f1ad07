#include "tangle/colour.hpp"

#include <sstream>
#include <vector>

namespace tangle {

Rat det2(const Mat2& m) { return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0); }

Mat2 inv2(const Mat2& m) {
  Rat d = det2(m);
  if (d == 0) throw std::domain_error("singular 2x2 matrix");
  Mat2 r;
  r.at(0, 0) = m.at(1, 1) / d;
  r.at(0, 1) = -m.at(0, 1) / d;
  r.at(1, 0) = -m.at(1, 0) / d;
  r.at(1, 1) = m.at(0, 0) / d;
  return r;
}

namespace {
// Fraction-free Gaussian elimination determinant / inverse for 4x4.
Rat det_n(std::array<std::array<Rat, 4>, 4> a) {
  Rat det = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (int r = col + 1; r < 4; ++r) {
      Rat f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}
}  // namespace

Rat det4(const Mat4& m) {
  std::array<std::array<Rat, 4>, 4> a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = m.at(i, j);
  return det_n(a);
}

Mat4 inv4(const Mat4& m) {
  // Gauss-Jordan on [m | I].
  std::array<std::array<Rat, 8>, 4> a{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = m.at(i, j);
    a[i][4 + i] = 1;
  }
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("singular 4x4 matrix");
    std::swap(a[piv], a[col]);
    Rat p = a[col][col];
    for (int c = 0; c < 8; ++c) a[col][c] /= p;
    for (int r = 0; r < 4; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col];
      for (int c = 0; c < 8; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.at(i, j) = a[i][4 + j];
  return out;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          r.at(2 * i + k, 2 * j + l) = a.at(i, j) * b.at(k, l);
  return r;
}

Mat2 pauli_a0() {
  Mat2 m;
  m.at(0, 1) = 1;
  m.at(1, 0) = 1;
  return m;
}

Mat2 pauli_a1() {
  Mat2 m;
  m.at(0, 0) = 1;
  m.at(1, 1) = -1;
  return m;
}

Mat2 pauli_a0_plus_a1() { return pauli_a0() + pauli_a1(); }

Mat2 zero2() { return Mat2{}; }

bool Colour::less(const Colour& o) const {
  if (kind() != o.kind()) throw KindMismatch("cannot order colours of different kinds");
  switch (kind()) {
    case Kind::Fox3:
      return fox() < o.fox();
    case Kind::Rational:
      return rat() < o.rat();
    default:
      throw KindMismatch("colour kind has no total order");
  }
}

namespace {

template <int N>
std::string mat_str(const Mat<N>& m) {
  std::string s = "[";
  for (int i = 0; i < N; ++i) {
    s += "[";
    for (int j = 0; j < N; ++j) {
      if (j) s += ",";
      s += rat_str(m.at(i, j));
    }
    s += "]";
    if (i + 1 < N) s += ",";
  }
  return s + "]";
}

// Parses "[[a,b],[c,d]]"-style nested lists of rationals.
std::optional<std::vector<std::vector<Rat>>> parse_rows(std::string_view s) {
  std::vector<std::vector<Rat>> rows;
  size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  };
  skip();
  if (i >= s.size() || s[i] != '[') return std::nullopt;
  ++i;
  while (true) {
    skip();
    if (i >= s.size()) return std::nullopt;
    if (s[i] == ']') {
      ++i;
      break;
    }
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] != '[') return std::nullopt;
    ++i;
    std::vector<Rat> row;
    while (true) {
      skip();
      size_t start = i;
      while (i < s.size() && s[i] != ',' && s[i] != ']') ++i;
      if (i >= s.size()) return std::nullopt;
      auto tok = s.substr(start, i - start);
      while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
      auto r = parse_rat(tok);
      if (!r) return std::nullopt;
      row.push_back(*r);
      if (s[i] == ']') {
        ++i;
        break;
      }
      ++i;  // ','
    }
    rows.push_back(std::move(row));
  }
  skip();
  if (i != s.size()) return std::nullopt;
  return rows;
}

}  // namespace

std::string colour_str(const Colour& c) {
  switch (c.kind()) {
    case Colour::Kind::Fox3:
      return "f" + std::to_string(c.fox());
    case Colour::Kind::Rational:
      return rat_str(c.rat());
    case Colour::Kind::Mat2:
      return mat_str(c.m2());
    case Colour::Kind::Mat4:
      return mat_str(c.m4());
    case Colour::Kind::Belief:
      return rat_str(c.bel().a) + "|" + rat_str(c.bel().b);
  }
  return "";
}

std::optional<std::string> colour_alias(const Colour& c) {
  if (c.kind() != Colour::Kind::Mat2) return std::nullopt;
  if (c.m2() == pauli_a0()) return "A0";
  if (c.m2() == pauli_a1()) return "A1";
  if (c.m2() == pauli_a0_plus_a1()) return "A0+A1";
  if (c.m2() == zero2()) return "Z2";
  return std::nullopt;
}

std::optional<Colour> parse_colour(std::string_view s) {
  if (s == "A0") return Colour(pauli_a0());
  if (s == "A1") return Colour(pauli_a1());
  if (s == "A0+A1") return Colour(pauli_a0_plus_a1());
  if (s == "Z2") return Colour(zero2());
  if (s.size() == 2 && s[0] == 'f' && s[1] >= '0' && s[1] <= '2')
    return Colour::fox3(s[1] - '0');
  if (auto bar = s.find('|'); bar != std::string_view::npos) {
    auto a = parse_rat(s.substr(0, bar));
    auto b = parse_rat(s.substr(bar + 1));
    if (!a || !b) return std::nullopt;
    return Colour(Belief{*a, *b});
  }
  if (!s.empty() && s[0] == '[') {
    auto rows = parse_rows(s);
    if (!rows) return std::nullopt;
    if (rows->size() == 2 && (*rows)[0].size() == 2 && (*rows)[1].size() == 2) {
      Mat2 m;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.at(i, j) = (*rows)[i][j];
      return Colour(m);
    }
    if (rows->size() == 4) {
      Mat4 m;
      for (int i = 0; i < 4; ++i) {
        if ((*rows)[i].size() != 4) return std::nullopt;
        for (int j = 0; j < 4; ++j) m.at(i, j) = (*rows)[i][j];
      }
      return Colour(m);
    }
    return std::nullopt;
  }
  auto r = parse_rat(s);
  if (!r) return std::nullopt;
  return Colour(*r);
}

}  // namespace tangle
