#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace hvr2 {

// Point of the rank-two lattice, in coordinates with respect to the standard
// basis e1, e2.
struct Vec2 {
  long x1 = 0, x2 = 0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x1, -a.x2}; }
  friend Vec2 operator*(long k, Vec2 a) { return {k * a.x1, k * a.x2}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x1 == b.x1 && a.x2 == b.x2; }
  friend bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }
  friend bool operator<(Vec2 a, Vec2 b) {
    return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2;
  }
  bool is_zero() const { return x1 == 0 && x2 == 0; }
  std::string str() const {
    return "(" + std::to_string(x1) + "," + std::to_string(x2) + ")";
  }
};

// Determinant of the 2x2 matrix with first row a and second row b.
inline long det2(Vec2 a, Vec2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }

// Ordered pair of lattice vectors; a Z-basis iff |det2(b1,b2)| = 1.
struct BasisPair {
  Vec2 b1, b2;
  friend bool operator==(const BasisPair& a, const BasisPair& b) {
    return a.b1 == b.b1 && a.b2 == b.b2;
  }
};

inline BasisPair standard_basis() { return {{1, 0}, {0, 1}}; }

inline bool is_zbasis(const BasisPair& b) {
  long d = det2(b.b1, b.b2);
  return d == 1 || d == -1;
}

// Integer inverse of the basis matrix (rows b1, b2); exists exactly for
// Z-bases, via the adjugate divided by det = +-1.
struct InverseBasisMatrix {
  long p1, q1, p2, q2;  // rows (p1 q1) and (p2 q2)
};

inline InverseBasisMatrix inverse_basis(const BasisPair& b) {
  long d = det2(b.b1, b.b2);
  if (d != 1 && d != -1)
    throw std::invalid_argument("inverse_basis: not a Z-basis (det " +
                                std::to_string(d) + ")");
  return {b.b2.x2 / d, -b.b1.x2 / d, -b.b2.x1 / d, b.b1.x1 / d};
}

// Coordinates (x, y) with v = x*b1 + y*b2; exact for Z-bases.
inline Vec2 coords(Vec2 v, const BasisPair& b) {
  InverseBasisMatrix inv = inverse_basis(b);
  return {v.x1 * inv.p1 + v.x2 * inv.p2, v.x1 * inv.q1 + v.x2 * inv.q2};
}

// If v is an integer multiple of b1, that multiple.
inline std::optional<long> multiple_of(Vec2 v, Vec2 b1) {
  if (det2(v, b1) != 0) return std::nullopt;
  if (b1.x1 != 0) {
    if (v.x1 % b1.x1 != 0) return std::nullopt;
    long k = v.x1 / b1.x1;
    return k * b1 == v ? std::optional<long>(k) : std::nullopt;
  }
  if (b1.x2 != 0) {
    if (v.x2 % b1.x2 != 0) return std::nullopt;
    long k = v.x2 / b1.x2;
    return k * b1 == v ? std::optional<long>(k) : std::nullopt;
  }
  return v.is_zero() ? std::optional<long>(0) : std::nullopt;
}

// The three coordinate cones used for module supports and triangular data:
// both coordinates nonnegative; both strictly positive; first coordinate
// free with second strictly positive.
enum class Cone { NonNegQuadrant, StrictPosQuadrant, MixedZN };

inline bool cone_contains(Cone cone, Vec2 v, const BasisPair& b) {
  Vec2 c = coords(v, b);
  switch (cone) {
    case Cone::NonNegQuadrant: return c.x1 >= 0 && c.x2 >= 0;
    case Cone::StrictPosQuadrant: return c.x1 >= 1 && c.x2 >= 1;
    case Cone::MixedZN: return c.x2 >= 1;
  }
  return false;
}

}  // namespace hvr2
