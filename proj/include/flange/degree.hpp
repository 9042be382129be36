// Multidegrees, bounding boxes with lexicographic point indexing, and
// coordinate subsets (faces).
#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "flange/error.hpp"

namespace flange {

/// A point of the n-dimensional integer grid.
struct Degree {
  std::vector<int> c;

  Degree() = default;
  explicit Degree(std::vector<int> coords) : c(std::move(coords)) {}
  Degree(std::initializer_list<int> coords) : c(coords) {}

  static Degree zero(int n) { return Degree(std::vector<int>(n, 0)); }

  int n() const { return static_cast<int>(c.size()); }
  int operator[](int i) const { return c[i]; }
  int& operator[](int i) { return c[i]; }

  Degree plus_axis(int axis, int delta = 1) const {
    Degree d = *this;
    d.c[axis] += delta;
    return d;
  }

  Degree negated() const {
    Degree d = *this;
    for (int& v : d.c) v = -v;
    return d;
  }

  friend Degree operator+(const Degree& a, const Degree& b) {
    Degree d = a;
    for (int i = 0; i < d.n(); ++i) d.c[i] += b.c[i];
    return d;
  }

  friend Degree operator-(const Degree& a, const Degree& b) {
    Degree d = a;
    for (int i = 0; i < d.n(); ++i) d.c[i] -= b.c[i];
    return d;
  }

  /// Componentwise (partial-order) comparison.
  bool leq(const Degree& b) const {
    for (int i = 0; i < n(); ++i)
      if (c[i] > b.c[i]) return false;
    return true;
  }

  friend bool operator==(const Degree&, const Degree&) = default;
  /// Lexicographic order with the first coordinate most significant; this
  /// is the order used everywhere points are enumerated or serialized.
  friend std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
    return a.c <=> b.c;
  }
};

inline std::string to_string(const Degree& d) {
  std::string s = "(";
  for (int i = 0; i < d.n(); ++i) {
    if (i) s += ",";
    s += std::to_string(d.c[i]);
  }
  return s + ")";
}

/// Closed axis-aligned box [low, high] of grid points.
class Box {
 public:
  Box(Degree low, Degree high) : low_(std::move(low)), high_(std::move(high)) {
    if (low_.n() != high_.n()) throw Error("box corners have different dimensions");
    if (!low_.leq(high_)) throw Error("box low corner must be <= high corner");
  }

  const Degree& low() const { return low_; }
  const Degree& high() const { return high_; }
  int n() const { return low_.n(); }

  std::int64_t point_count() const {
    std::int64_t total = 1;
    for (int i = 0; i < n(); ++i) total *= high_[i] - low_[i] + 1;
    return total;
  }

  bool contains(const Degree& d) const { return low_.leq(d) && d.leq(high_); }

  bool contains_box(const Box& inner) const {
    return contains(inner.low_) && contains(inner.high_);
  }

  Degree clamp(const Degree& d) const {
    Degree out = d;
    for (int i = 0; i < n(); ++i) {
      if (out[i] < low_[i]) out[i] = low_[i];
      if (out[i] > high_[i]) out[i] = high_[i];
    }
    return out;
  }

  /// Index of an in-box point in lexicographic order (first coordinate
  /// most significant, so the last coordinate varies fastest).
  std::int64_t index_of(const Degree& d) const {
    std::int64_t idx = 0;
    for (int i = 0; i < n(); ++i) idx = idx * (high_[i] - low_[i] + 1) + (d[i] - low_[i]);
    return idx;
  }

  Degree point_at(std::int64_t idx) const {
    Degree d = low_;
    for (int i = n() - 1; i >= 0; --i) {
      std::int64_t w = high_[i] - low_[i] + 1;
      d[i] = low_[i] + static_cast<int>(idx % w);
      idx /= w;
    }
    return d;
  }

  /// Advance `d` to the next point in lexicographic order; false past the end.
  bool next_point(Degree& d) const {
    for (int i = n() - 1; i >= 0; --i) {
      if (d[i] < high_[i]) {
        ++d[i];
        for (int j = i + 1; j < n(); ++j) d[j] = low_[j];
        return true;
      }
    }
    return false;
  }

  Box padded(int k) const {
    Degree lo = low_, hi = high_;
    for (int i = 0; i < n(); ++i) {
      lo[i] -= k;
      hi[i] += k;
    }
    return Box(lo, hi);
  }

  /// The box {-d : d in this box}.
  Box negated() const { return Box(high_.negated(), low_.negated()); }

  static Box hull(const Box& a, const Box& b) {
    if (a.n() != b.n()) throw Error("box hull: dimension mismatch");
    Degree lo = a.low_, hi = a.high_;
    for (int i = 0; i < a.n(); ++i) {
      lo[i] = std::min(lo[i], b.low_[i]);
      hi[i] = std::max(hi[i], b.high_[i]);
    }
    return Box(lo, hi);
  }

  friend bool operator==(const Box&, const Box&) = default;

 private:
  Degree low_, high_;
};

/// A subset of the coordinate axes 0..n-1, packed as a bitmask.
struct Face {
  std::uint32_t bits = 0;

  static Face none() { return {}; }
  static Face all(int n) { return {(std::uint32_t(1) << n) - 1}; }
  static Face axis(int i) { return {std::uint32_t(1) << i}; }

  bool contains(int axis) const { return (bits >> axis) & 1u; }
  Face with(int axis) const { return {bits | (std::uint32_t(1) << axis)}; }
  int count() const { return __builtin_popcount(bits); }
  bool subset_of(const Face& o) const { return (bits & ~o.bits) == 0; }
  Face complement(int n) const { return {Face::all(n).bits & ~bits}; }

  /// 1-based axis list, ascending — the form used in reports.
  std::vector<int> axes_one_based(int n) const {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
      if (contains(i)) out.push_back(i + 1);
    return out;
  }

  friend bool operator==(const Face&, const Face&) = default;
  friend std::strong_ordering operator<=>(const Face& a, const Face& b) {
    return a.bits <=> b.bits;
  }
};

/// All 2^n faces in ascending bitmask order.
inline std::vector<Face> all_faces(int n) {
  std::vector<Face> out;
  out.reserve(std::size_t(1) << n);
  for (std::uint32_t b = 0; b < (std::uint32_t(1) << n); ++b) out.push_back({b});
  return out;
}

}  // namespace flange
