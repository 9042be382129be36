// Finitely determined grid modules: a finite box of vector-space
// dimensions plus one step map per in-box edge, extended to the whole
// grid by clamping.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flange/degree.hpp"
#include "flange/error.hpp"
#include "flange/field.hpp"
#include "flange/matrix.hpp"

namespace flange {

enum class SummandKind { flat, injective };

inline std::string to_string(SummandKind k) {
  return k == SummandKind::flat ? "flat" : "injective";
}

/// One indecomposable building block: for a face s and corner degree a,
/// kind `flat` is the indicator module of the upset a + (directions off s
/// increase, directions in s run freely), and kind `injective` is the
/// indicator module of the mirrored downset.  The degree is canonical
/// when its coordinates on the face's axes are zero.
struct Summand {
  SummandKind kind = SummandKind::flat;
  Degree degree;
  Face face;

  Summand() = default;
  Summand(SummandKind k, Degree d, Face f) : kind(k), degree(std::move(d)), face(f) {
    canonicalize();
  }

  void canonicalize() {
    for (int i = 0; i < degree.n(); ++i)
      if (face.contains(i)) degree[i] = 0;
  }

  Summand dual() const {
    return Summand(kind == SummandKind::flat ? SummandKind::injective : SummandKind::flat,
                   degree.negated(), face);
  }

  /// Does the grid point q lie in this summand's support set?
  /// Only the coordinates off the face matter.
  bool supports(const Degree& q) const {
    for (int i = 0; i < q.n(); ++i) {
      if (face.contains(i)) continue;
      if (kind == SummandKind::flat ? q[i] < degree[i] : q[i] > degree[i]) return false;
    }
    return true;
  }

  friend bool operator==(const Summand&, const Summand&) = default;
  friend std::strong_ordering operator<=>(const Summand& a, const Summand& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.face <=> b.face; c != 0) return c;
    return a.degree <=> b.degree;
  }
};

inline std::string to_string(const Summand& s) {
  std::string f = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (!s.face.contains(i)) continue;
    if (!first) f += ",";
    f += std::to_string(i + 1);
    first = false;
  }
  f += "}";
  return to_string(s.kind) + to_string(s.degree) + f;
}

/// A persistence module presented on a finite box.  dims_ holds one
/// dimension per box point in lexicographic order; steps_[axis][idx] is
/// the map leaving point idx along that axis (only slots whose head stays
/// in the box are meaningful).  Outside the box, the module is read
/// through Box::clamp: the value at q is the value at clamp(q) and steps
/// that do not move the clamped point are identities.
class GridModule {
 public:
  GridModule(FieldSpec field, Box box, std::vector<int> dims,
             std::vector<std::vector<Matrix>> steps)
      : field_(field), box_(std::move(box)), dims_(std::move(dims)), steps_(std::move(steps)) {
    check_shapes();
  }

  /// Build from callbacks; `step_fn(d, axis)` is called only for in-box edges.
  static GridModule build(const FieldSpec& field, const Box& box,
                          const std::function<int(const Degree&)>& dim_fn,
                          const std::function<Matrix(const Degree&, int)>& step_fn) {
    std::int64_t count = box.point_count();
    std::vector<int> dims(count);
    Degree d = box.low();
    std::int64_t idx = 0;
    do {
      dims[idx++] = dim_fn(d);
    } while (box.next_point(d));
    std::vector<std::vector<Matrix>> steps(
        box.n(), std::vector<Matrix>(count, Matrix(field, 0, 0)));
    d = box.low();
    idx = 0;
    do {
      for (int i = 0; i < box.n(); ++i)
        if (d[i] < box.high()[i]) steps[i][idx] = step_fn(d, i);
      ++idx;
    } while (box.next_point(d));
    return GridModule(field, box, std::move(dims), std::move(steps));
  }

  /// The zero module, carried by a single point at the origin.
  static GridModule zero(const FieldSpec& field, int n) {
    Box b(Degree::zero(n), Degree::zero(n));
    return GridModule(field, b, {0}, std::vector<std::vector<Matrix>>(n, {Matrix(field, 0, 0)}));
  }

  int n() const { return box_.n(); }
  const Box& box() const { return box_; }
  const FieldSpec& field() const { return field_; }

  int dim_in_box(std::int64_t idx) const { return dims_[idx]; }
  int dim_at(const Degree& q) const { return dims_[box_.index_of(box_.clamp(q))]; }

  /// The step map leaving the in-box point with index idx along `axis`.
  const Matrix& step_in_box(std::int64_t idx, int axis) const {
    return steps_[axis][idx];
  }

  /// Clamp-extended step q -> q + e_axis for an arbitrary grid point q.
  Matrix step(const Degree& q, int axis) const {
    Degree c = box_.clamp(q);
    Degree c2 = box_.clamp(q.plus_axis(axis));
    if (c == c2) return Matrix::identity(field_, dims_[box_.index_of(c)]);
    return steps_[axis][box_.index_of(c)];
  }

  /// Composite of steps from `from` up to `to` (componentwise from <= to),
  /// walking axis 0 first, then axis 1, and so on.  Any other path gives
  /// the same map on a validated module.
  Matrix transition(const Degree& from, const Degree& to) const {
    if (!from.leq(to)) throw Error("transition: source degree must be <= target degree");
    Matrix acc = Matrix::identity(field_, dim_at(from));
    Degree q = from;
    for (int i = 0; i < n(); ++i) {
      while (q[i] < to[i]) {
        acc = step(q, i) * acc;
        ++q[i];
      }
    }
    return acc;
  }

  bool is_zero_module() const {
    for (int d : dims_)
      if (d != 0) return false;
    return true;
  }

  std::int64_t total_dim() const {
    std::int64_t t = 0;
    for (int d : dims_) t += d;
    return t;
  }

  friend bool operator==(const GridModule& a, const GridModule& b) {
    if (a.field_ != b.field_ || a.box_ != b.box_ || a.dims_ != b.dims_) return false;
    Degree d = a.box_.low();
    std::int64_t idx = 0;
    do {
      for (int i = 0; i < a.n(); ++i)
        if (d[i] < a.box_.high()[i] && !(a.steps_[i][idx] == b.steps_[i][idx])) return false;
      ++idx;
    } while (a.box_.next_point(d));
    return true;
  }

 private:
  void check_shapes() const {
    if (static_cast<std::int64_t>(dims_.size()) != box_.point_count())
      throw Error("grid module: dims length does not match box point count");
    for (int v : dims_)
      if (v < 0) throw Error("grid module: negative dimension");
    if (static_cast<int>(steps_.size()) != n())
      throw Error("grid module: need one step table per axis");
    for (int i = 0; i < n(); ++i) {
      if (static_cast<std::int64_t>(steps_[i].size()) != box_.point_count())
        throw Error("grid module: step table length does not match box point count");
      Degree d = box_.low();
      std::int64_t idx = 0;
      do {
        if (d[i] < box_.high()[i]) {
          const Matrix& m = steps_[i][idx];
          int src = dims_[idx];
          int dst = dims_[box_.index_of(d.plus_axis(i))];
          if (m.cols() != src || m.rows() != dst)
            throw Error("grid module: step at " + flange::to_string(d) + " axis " +
                        std::to_string(i + 1) + " has shape " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", expected " + std::to_string(dst) + "x" +
                        std::to_string(src));
          if (m.field() != field_) throw Error("grid module: step over wrong field");
        }
        ++idx;
      } while (box_.next_point(d));
    }
  }

  FieldSpec field_;
  Box box_;
  std::vector<int> dims_;
  std::vector<std::vector<Matrix>> steps_;
};

/// One failed commutativity square, for diagnostics.
struct Violation {
  Degree at;
  int axis_a = 0, axis_b = 0;
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Check that all square faces of the grid commute.
inline ValidationReport validate(const GridModule& m) {
  ValidationReport report;
  const Box& box = m.box();
  Degree d = box.low();
  do {
    for (int i = 0; i < m.n(); ++i) {
      if (d[i] >= box.high()[i]) continue;
      for (int j = i + 1; j < m.n(); ++j) {
        if (d[j] >= box.high()[j]) continue;
        Matrix via_i = m.step(d.plus_axis(i), j) * m.step(d, i);
        Matrix via_j = m.step(d.plus_axis(j), i) * m.step(d, j);
        if (!(via_i == via_j))
          report.violations.push_back(
              {d, i + 1, j + 1, "square at " + to_string(d) + " for axes " +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                    " does not commute"});
      }
    }
  } while (box.next_point(d));
  return report;
}

/// The standard rank-one module of a summand, presented on `box`.  The
/// corner degree must lie strictly inside the box on every axis off the
/// face, otherwise the box cannot determine the module and
/// BoxNotDetermining is thrown.
inline GridModule standard_module(const Summand& s, const Box& box, const FieldSpec& field) {
  Summand c = s;
  c.canonicalize();
  for (int i = 0; i < box.n(); ++i) {
    if (c.face.contains(i)) continue;
    if (c.degree[i] <= box.low()[i] || c.degree[i] >= box.high()[i])
      throw BoxNotDetermining("summand " + to_string(c) + " needs " + std::to_string(c.degree[i]) +
                              " strictly inside [" + std::to_string(box.low()[i]) + "," +
                              std::to_string(box.high()[i]) + "] on axis " + std::to_string(i + 1));
  }
  return GridModule::build(
      field, box, [&](const Degree& q) { return c.supports(q) ? 1 : 0; },
      [&](const Degree& q, int axis) {
        bool head = c.supports(q.plus_axis(axis));
        bool tail = c.supports(q);
        Matrix m(field, head ? 1 : 0, tail ? 1 : 0);
        if (head && tail) m.set(0, 0, field.one());
        return m;
      });
}

/// Translate: values of the result at q are the values of m at q + a.
inline GridModule shift(const GridModule& m, const Degree& a) {
  Box box(m.box().low() - a, m.box().high() - a);
  return GridModule::build(
      m.field(), box, [&](const Degree& q) { return m.dim_at(q + a); },
      [&](const Degree& q, int axis) { return m.step(q + a, axis); });
}

/// Re-present the same module on a larger box; new points take the
/// clamped dimensions and new steps in clamped directions are identities.
inline GridModule extend_box(const GridModule& m, const Box& new_box) {
  if (!new_box.contains_box(m.box())) throw Error("extend_box: new box must contain the old one");
  return GridModule::build(
      m.field(), new_box, [&](const Degree& q) { return m.dim_at(q); },
      [&](const Degree& q, int axis) { return m.step(q, axis); });
}

/// Pointwise dimensions over the box, keyed by degree in lexicographic order.
inline std::map<Degree, int> dimension_vector(const GridModule& m) {
  std::map<Degree, int> out;
  Degree d = m.box().low();
  std::int64_t idx = 0;
  do {
    out[d] = m.dim_in_box(idx++);
  } while (m.box().next_point(d));
  return out;
}

}  // namespace flange
