// The functor layer: Matlis duality, localization and colocalization
// along a face, and the face-indexed top and socle functors with their
// multiplicity tables.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "flange/grid_module.hpp"
#include "flange/grid_morphism.hpp"

namespace flange {

/// Matlis dual: value at q is the dual of the value at -q, steps are the
/// transposed steps read backwards.  Applying it twice reproduces the
/// original presentation exactly (same box, dims, and matrices).
inline GridModule matlis_dual(const GridModule& m) {
  Box box = m.box().negated();
  return GridModule::build(
      m.field(), box, [&](const Degree& q) { return m.dim_at(q.negated()); },
      [&](const Degree& q, int axis) {
        // Step q -> q + e_axis dualizes the step -q - e_axis -> -q.
        return m.step(q.plus_axis(axis).negated(), axis).transpose();
      });
}

/// Matlis duality on morphisms: f : M -> N yields f^dual : N^dual -> M^dual.
inline GridMorphism matlis_dual(const GridMorphism& f) {
  GridModule src = matlis_dual(f.target());
  GridModule dst = matlis_dual(f.source());
  std::vector<Matrix> blocks;
  const Box& box = src.box();
  blocks.reserve(box.point_count());
  Degree d = box.low();
  do {
    blocks.push_back(f.block_at(d.negated()).transpose());
  } while (box.next_point(d));
  return GridMorphism(std::move(src), std::move(dst), std::move(blocks));
}

/// The canonical evaluation map M -> (M^dual)^dual.  With the dual-basis
/// conventions used here its blocks are identity matrices.
inline GridMorphism double_dual_comparison(const GridModule& m) {
  GridModule dd = matlis_dual(matlis_dual(m));
  if (dd.box() != m.box()) throw AssertionFailure("double dual changed the box");
  std::vector<Matrix> blocks;
  blocks.reserve(m.box().point_count());
  for (std::int64_t i = 0; i < m.box().point_count(); ++i) {
    if (dd.dim_in_box(i) != m.dim_in_box(i))
      throw AssertionFailure("double dual changed a pointwise dimension");
    blocks.push_back(Matrix::identity(m.field(), m.dim_in_box(i)));
  }
  return GridMorphism(m, dd, std::move(blocks));
}

struct LocalizeResult {
  GridModule module;
  GridMorphism unit;  // M -> localized module
};

/// Localize along the axes of `face`: values stabilize in those
/// directions, realized on the same box by reading each point with its
/// face coordinates clamped to the box top.  Face-direction steps become
/// identities; the unit is the transition into the clamped point.
inline LocalizeResult localize(const GridModule& m, const Face& face) {
  const Box& box = m.box();
  auto up = [&](const Degree& q) {
    Degree u = q;
    for (int i = 0; i < box.n(); ++i)
      if (face.contains(i)) u[i] = box.high()[i];
    return u;
  };
  GridModule loc = GridModule::build(
      m.field(), box, [&](const Degree& q) { return m.dim_at(up(q)); },
      [&](const Degree& q, int axis) {
        if (face.contains(axis)) return Matrix::identity(m.field(), m.dim_at(up(q)));
        return m.step(up(q), axis);
      });
  std::vector<Matrix> unit_blocks;
  unit_blocks.reserve(box.point_count());
  Degree d = box.low();
  do {
    unit_blocks.push_back(m.transition(d, up(d)));
  } while (box.next_point(d));
  GridMorphism unit(m, loc, std::move(unit_blocks));
  return {std::move(loc), std::move(unit)};
}

struct ColocalizeResult {
  GridModule module;
  GridMorphism counit;  // colocalized module -> M
};

/// Colocalize along the axes of `face`: dual construction, reading each
/// point with its face coordinates clamped to the box bottom.
inline ColocalizeResult colocalize(const GridModule& m, const Face& face) {
  const Box& box = m.box();
  auto down = [&](const Degree& q) {
    Degree l = q;
    for (int i = 0; i < box.n(); ++i)
      if (face.contains(i)) l[i] = box.low()[i];
    return l;
  };
  GridModule coloc = GridModule::build(
      m.field(), box, [&](const Degree& q) { return m.dim_at(down(q)); },
      [&](const Degree& q, int axis) {
        if (face.contains(axis)) return Matrix::identity(m.field(), m.dim_at(down(q)));
        return m.step(down(q), axis);
      });
  std::vector<Matrix> counit_blocks;
  counit_blocks.reserve(box.point_count());
  Degree d = box.low();
  do {
    counit_blocks.push_back(m.transition(down(d), d));
  } while (box.next_point(d));
  GridMorphism counit(coloc, m, std::move(counit_blocks));
  return {std::move(coloc), std::move(counit)};
}

inline GridMorphism localize(const GridMorphism& f, const Face& face) {
  LocalizeResult src = localize(f.source(), face);
  LocalizeResult dst = localize(f.target(), face);
  const Box& box = src.module.box();
  std::vector<Matrix> blocks;
  blocks.reserve(box.point_count());
  Degree d = box.low();
  do {
    Degree u = d;
    for (int i = 0; i < box.n(); ++i)
      if (face.contains(i)) u[i] = box.high()[i];
    blocks.push_back(f.block_at(u));
  } while (box.next_point(d));
  return GridMorphism(std::move(src.module), std::move(dst.module), std::move(blocks));
}

inline GridMorphism colocalize(const GridMorphism& f, const Face& face) {
  ColocalizeResult src = colocalize(f.source(), face);
  ColocalizeResult dst = colocalize(f.target(), face);
  const Box& box = src.module.box();
  std::vector<Matrix> blocks;
  blocks.reserve(box.point_count());
  Degree d = box.low();
  do {
    Degree l = d;
    for (int i = 0; i < box.n(); ++i)
      if (face.contains(i)) l[i] = box.low()[i];
    blocks.push_back(f.block_at(l));
  } while (box.next_point(d));
  return GridMorphism(std::move(src.module), std::move(dst.module), std::move(blocks));
}

namespace detail {

/// Working data behind the top functor at one face: the colocalized
/// module on the padded box, the pointwise projection onto the quotient
/// by all incoming steps off the face, and a section of it.
struct TopData {
  GridModule module;
  std::vector<Matrix> proj;
  std::vector<Matrix> section;
};

inline TopData top_data(const GridModule& m, const Face& face, int pad) {
  Box padded = m.box().padded(pad);
  GridModule inflated = extend_box(m, padded);
  GridModule coloc = colocalize(inflated, face).module;
  std::int64_t count = padded.point_count();
  std::vector<Matrix> incoming(count, Matrix(m.field(), 0, 0));
  Degree d = padded.low();
  std::int64_t idx = 0;
  do {
    std::vector<Matrix> parts;
    for (int i = 0; i < padded.n(); ++i) {
      if (face.contains(i)) continue;
      // Clamp-extended step from just below; identity on the padded rim,
      // where it contributes the whole space and kills the quotient.
      parts.push_back(coloc.step(d.plus_axis(i, -1), i));
    }
    incoming[idx] = hcat_all(m.field(), coloc.dim_in_box(idx), parts);
    ++idx;
  } while (padded.next_point(d));
  QuotientData q = pointwise_quotient(coloc, incoming);
  return {std::move(q.module), std::move(q.proj), std::move(q.section)};
}

/// Working data behind the socle functor at one face: the localized
/// module on the padded box and the pointwise inclusion of the joint
/// kernel of all outgoing steps off the face.
struct SocData {
  GridModule module;
  std::vector<Matrix> incl;
  GridModule localized;
  GridMorphism unit;  // inflated module -> localized module
};

inline SocData soc_data(const GridModule& m, const Face& face, int pad) {
  Box padded = m.box().padded(pad);
  GridModule inflated = extend_box(m, padded);
  LocalizeResult loc = localize(inflated, face);
  const GridModule& lmod = loc.module;
  std::int64_t count = padded.point_count();
  std::vector<Matrix> incl(count, Matrix(m.field(), 0, 0));
  std::vector<int> dims(count);
  Degree d = padded.low();
  std::int64_t idx = 0;
  do {
    std::vector<Matrix> parts;
    for (int i = 0; i < padded.n(); ++i) {
      if (face.contains(i)) continue;
      parts.push_back(lmod.step(d, i));  // identity past the rim: kernel dies there
    }
    incl[idx] = kernel_basis(vcat_all(m.field(), lmod.dim_in_box(idx), parts));
    dims[idx] = incl[idx].cols();
    ++idx;
  } while (padded.next_point(d));
  std::vector<std::vector<Matrix>> steps(padded.n(),
                                         std::vector<Matrix>(count, Matrix(m.field(), 0, 0)));
  d = padded.low();
  idx = 0;
  do {
    for (int i = 0; i < padded.n(); ++i) {
      if (d[i] >= padded.high()[i]) continue;
      std::int64_t head = padded.index_of(d.plus_axis(i));
      std::optional<Matrix> s = solve_matrix(incl[head], lmod.step_in_box(idx, i) * incl[idx]);
      if (!s) throw AssertionFailure("socle is not closed under the steps");
      steps[i][idx] = std::move(*s);
    }
    ++idx;
  } while (padded.next_point(d));
  GridModule soc(m.field(), padded, std::move(dims), std::move(steps));
  return {std::move(soc), std::move(incl), lmod, loc.unit};
}

}  // namespace detail

/// Top functor at a face: colocalize, then divide out everything arriving
/// along axes off the face.  The result is presented on the box padded by
/// `pad` (default 1); with the clamp conventions it vanishes on the rim,
/// so the padded presentation determines it on the whole grid.
inline GridModule top_functor(const GridModule& m, const Face& face, int pad = 1) {
  return detail::top_data(m, face, pad).module;
}

inline GridMorphism top_functor(const GridMorphism& f, const Face& face, int pad = 1) {
  detail::TopData src = detail::top_data(f.source(), face, pad);
  detail::TopData dst = detail::top_data(f.target(), face, pad);
  Box padded = f.source().box().padded(pad);
  GridMorphism coloc = colocalize(extended_to(f, padded), face);
  std::vector<Matrix> blocks;
  blocks.reserve(padded.point_count());
  for (std::int64_t i = 0; i < padded.point_count(); ++i)
    blocks.push_back(dst.proj[i] * (coloc.block_in_box(i) * src.section[i]));
  return GridMorphism(std::move(src.module), std::move(dst.module), std::move(blocks));
}

/// Socle functor at a face: localize, then take the joint kernel of the
/// steps leaving along axes off the face.  Presented on the padded box,
/// where it vanishes on the rim.
inline GridModule soc_functor(const GridModule& m, const Face& face, int pad = 1) {
  return detail::soc_data(m, face, pad).module;
}

inline GridMorphism soc_functor(const GridMorphism& f, const Face& face, int pad = 1) {
  detail::SocData src = detail::soc_data(f.source(), face, pad);
  detail::SocData dst = detail::soc_data(f.target(), face, pad);
  Box padded = f.source().box().padded(pad);
  GridMorphism loc = localize(extended_to(f, padded), face);
  std::vector<Matrix> blocks;
  blocks.reserve(padded.point_count());
  for (std::int64_t i = 0; i < padded.point_count(); ++i) {
    std::optional<Matrix> b = solve_matrix(dst.incl[i], loc.block_in_box(i) * src.incl[i]);
    if (!b) throw AssertionFailure("socle functor: image leaves the target socle");
    blocks.push_back(std::move(*b));
  }
  return GridMorphism(std::move(src.module), std::move(dst.module), std::move(blocks));
}

/// Face-and-degree-indexed multiplicities.  Keys are (face, degree) with
/// the degree canonical (zero on the face axes); only nonzero entries are
/// stored, in (face bits, lexicographic degree) order.
class MultTable {
 public:
  using Key = std::pair<Face, Degree>;

  void add(const Face& face, const Degree& canonical_degree, int mult) {
    if (mult == 0) return;
    auto key = Key{face, canonical_degree};
    auto it = entries_.find(key);
    if (it == entries_.end())
      entries_.emplace(key, mult);
    else if ((it->second += mult) == 0)
      entries_.erase(it);
  }

  int at(const Face& face, const Degree& canonical_degree) const {
    auto it = entries_.find(Key{face, canonical_degree});
    return it == entries_.end() ? 0 : it->second;
  }

  const std::map<Key, int>& entries() const { return entries_; }

  /// The table with every degree negated (faces kept).
  MultTable negated() const {
    MultTable out;
    for (const auto& [key, mult] : entries_) out.add(key.first, key.second.negated(), mult);
    return out;
  }

  static MultTable from_summands(const std::vector<Summand>& summands) {
    MultTable out;
    for (const Summand& s : summands) out.add(s.face, s.degree, 1);
    return out;
  }

  friend bool operator==(const MultTable&, const MultTable&) = default;

 private:
  std::map<Key, int> entries_;
};

namespace detail {

/// Read a face-constant functor value off its representatives: points of
/// the padded box whose face coordinates sit at the padded bottom.
inline void read_face_table(const GridModule& value, const Face& face, MultTable& out) {
  const Box& box = value.box();
  Degree d = box.low();
  do {
    bool representative = true;
    for (int i = 0; i < box.n(); ++i)
      if (face.contains(i) && d[i] != box.low()[i]) representative = false;
    if (representative) {
      int dim = value.dim_at(d);
      if (dim > 0) {
        Degree canonical = d;
        for (int i = 0; i < box.n(); ++i)
          if (face.contains(i)) canonical[i] = 0;
        out.add(face, canonical, dim);
      }
    }
  } while (box.next_point(d));
}

}  // namespace detail

/// All top multiplicities of m: for every face, the pointwise dimensions
/// of the top functor, read on one representative per face-parallel line.
inline MultTable top_table(const GridModule& m, int pad = 1) {
  MultTable out;
  for (const Face& face : all_faces(m.n()))
    detail::read_face_table(top_functor(m, face, pad), face, out);
  return out;
}

/// All socle multiplicities of m, analogously.
inline MultTable soc_table(const GridModule& m, int pad = 1) {
  MultTable out;
  for (const Face& face : all_faces(m.n()))
    detail::read_face_table(soc_functor(m, face, pad), face, out);
  return out;
}

}  // namespace flange
