// Natural transformations between grid modules, plus the pointwise
// constructions built from them: kernels, cokernels, direct sums, and
// the full space of natural maps.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "flange/grid_module.hpp"

namespace flange {

/// A morphism of grid modules presented on one common box: one block per
/// box point, rows = target dimension, cols = source dimension.  Outside
/// the box the blocks extend by clamping, like the modules themselves.
class GridMorphism {
 public:
  GridMorphism(GridModule source, GridModule target, std::vector<Matrix> blocks)
      : source_(std::move(source)), target_(std::move(target)), blocks_(std::move(blocks)) {
    if (source_.box() != target_.box())
      throw Error("grid morphism: source and target must share a box");
    if (source_.field() != target_.field()) throw Error("grid morphism: field mismatch");
    if (static_cast<std::int64_t>(blocks_.size()) != source_.box().point_count())
      throw Error("grid morphism: need one block per box point");
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(blocks_.size()); ++i) {
      if (blocks_[i].rows() != target_.dim_in_box(i) || blocks_[i].cols() != source_.dim_in_box(i))
        throw Error("grid morphism: block shape mismatch at point index " + std::to_string(i));
    }
  }

  static GridMorphism identity(const GridModule& m) {
    std::vector<Matrix> blocks;
    blocks.reserve(m.box().point_count());
    for (std::int64_t i = 0; i < m.box().point_count(); ++i)
      blocks.push_back(Matrix::identity(m.field(), m.dim_in_box(i)));
    return GridMorphism(m, m, std::move(blocks));
  }

  static GridMorphism zero(const GridModule& source, const GridModule& target) {
    std::vector<Matrix> blocks;
    blocks.reserve(source.box().point_count());
    for (std::int64_t i = 0; i < source.box().point_count(); ++i)
      blocks.push_back(Matrix(source.field(), target.dim_in_box(i), source.dim_in_box(i)));
    return GridMorphism(source, target, std::move(blocks));
  }

  const GridModule& source() const { return source_; }
  const GridModule& target() const { return target_; }
  const Matrix& block_in_box(std::int64_t idx) const { return blocks_[idx]; }
  Matrix block_at(const Degree& q) const {
    return blocks_[source_.box().index_of(source_.box().clamp(q))];
  }

  bool is_zero() const {
    for (const Matrix& b : blocks_)
      if (!b.is_zero()) return false;
    return true;
  }

  friend bool operator==(const GridMorphism& a, const GridMorphism& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.blocks_ == b.blocks_;
  }

 private:
  GridModule source_, target_;
  std::vector<Matrix> blocks_;
};

/// Check every naturality square target.step * block == block * source.step.
inline ValidationReport validate(const GridMorphism& f) {
  ValidationReport report;
  const Box& box = f.source().box();
  Degree d = box.low();
  std::int64_t idx = 0;
  do {
    for (int i = 0; i < box.n(); ++i) {
      if (d[i] >= box.high()[i]) continue;
      std::int64_t head = box.index_of(d.plus_axis(i));
      Matrix lhs = f.target().step_in_box(idx, i) * f.block_in_box(idx);
      Matrix rhs = f.block_in_box(head) * f.source().step_in_box(idx, i);
      if (!(lhs == rhs))
        report.violations.push_back({d, i + 1, i + 1,
                                     "naturality fails at " + to_string(d) + " along axis " +
                                         std::to_string(i + 1)});
    }
    ++idx;
  } while (box.next_point(d));
  return report;
}

/// g after f.  Sources/targets must agree pointwise (box, dims, field).
inline GridMorphism compose(const GridMorphism& g, const GridMorphism& f) {
  if (f.target().box() != g.source().box() || f.target().field() != g.source().field())
    throw Error("compose: middle modules do not match");
  std::vector<Matrix> blocks;
  std::int64_t count = f.source().box().point_count();
  blocks.reserve(count);
  for (std::int64_t i = 0; i < count; ++i) {
    if (f.target().dim_in_box(i) != g.source().dim_in_box(i))
      throw Error("compose: middle modules do not match");
    blocks.push_back(g.block_in_box(i) * f.block_in_box(i));
  }
  return GridMorphism(f.source(), g.target(), std::move(blocks));
}

/// Re-present a morphism on a larger common box via clamp extension.
inline GridMorphism extended_to(const GridMorphism& f, const Box& new_box) {
  GridModule src = extend_box(f.source(), new_box);
  GridModule dst = extend_box(f.target(), new_box);
  std::vector<Matrix> blocks;
  blocks.reserve(new_box.point_count());
  Degree d = new_box.low();
  do {
    blocks.push_back(f.block_at(d));
  } while (new_box.next_point(d));
  return GridMorphism(std::move(src), std::move(dst), std::move(blocks));
}

inline bool is_mono(const GridMorphism& f) {
  for (std::int64_t i = 0; i < f.source().box().point_count(); ++i)
    if (rank_of(f.block_in_box(i)) != f.source().dim_in_box(i)) return false;
  return true;
}

inline bool is_epi(const GridMorphism& f) {
  for (std::int64_t i = 0; i < f.source().box().point_count(); ++i)
    if (rank_of(f.block_in_box(i)) != f.target().dim_in_box(i)) return false;
  return true;
}

/// Isomorphism test: every block square and invertible.
inline bool is_iso(const GridMorphism& f) {
  for (std::int64_t i = 0; i < f.source().box().point_count(); ++i) {
    const Matrix& b = f.block_in_box(i);
    if (b.rows() != b.cols() || rank_of(b) != b.rows()) return false;
  }
  return true;
}

struct KernelResult {
  GridModule module;
  GridMorphism mono;  // kernel -> source
};

/// Pointwise kernel with its inclusion.  Basis at each point: the
/// deterministic kernel_basis of the block.
inline KernelResult kernel_of(const GridMorphism& f) {
  const GridModule& m = f.source();
  const Box& box = m.box();
  std::int64_t count = box.point_count();
  std::vector<Matrix> incl(count, Matrix(m.field(), 0, 0));
  std::vector<int> dims(count);
  for (std::int64_t i = 0; i < count; ++i) {
    incl[i] = kernel_basis(f.block_in_box(i));
    dims[i] = incl[i].cols();
  }
  std::vector<std::vector<Matrix>> steps(box.n(),
                                         std::vector<Matrix>(count, Matrix(m.field(), 0, 0)));
  Degree d = box.low();
  std::int64_t idx = 0;
  do {
    for (int i = 0; i < box.n(); ++i) {
      if (d[i] >= box.high()[i]) continue;
      std::int64_t head = box.index_of(d.plus_axis(i));
      std::optional<Matrix> s = solve_matrix(incl[head], m.step_in_box(idx, i) * incl[idx]);
      if (!s) throw AssertionFailure("kernel: steps do not restrict to the kernel");
      steps[i][idx] = std::move(*s);
    }
    ++idx;
  } while (box.next_point(d));
  GridModule k(m.field(), box, std::move(dims), std::move(steps));
  std::vector<Matrix> blocks(incl.begin(), incl.end());
  GridMorphism mono(k, m, std::move(blocks));
  return {std::move(k), std::move(mono)};
}

struct CokernelResult {
  GridModule module;
  GridMorphism epi;  // target -> cokernel
};

namespace detail {

/// Shared pointwise-quotient helper: given, at every box point, a matrix
/// whose column space is the subspace to kill inside `total`, produce the
/// quotient module together with the projection blocks and a fixed linear
/// section of each projection.  The quotient basis is deterministic: pivot
/// columns of the span matrix, completed by standard basis vectors.
struct QuotientData {
  GridModule module;
  std::vector<Matrix> proj;     // total(q) -> quotient(q)
  std::vector<Matrix> section;  // quotient(q) -> total(q), proj * section = id
};

inline QuotientData pointwise_quotient(const GridModule& total,
                                       const std::vector<Matrix>& span) {
  const Box& box = total.box();
  const FieldSpec& field = total.field();
  std::int64_t count = box.point_count();
  std::vector<Matrix> proj(count, Matrix(field, 0, 0));
  std::vector<Matrix> section(count, Matrix(field, 0, 0));
  std::vector<int> dims(count);
  for (std::int64_t i = 0; i < count; ++i) {
    int total_dim = total.dim_in_box(i);
    Matrix image = column_space_basis(span[i]);
    Matrix complement = extend_to_basis(image, total_dim);
    Matrix basis = hcat(image, complement);
    Matrix inv = inverse_of(basis);
    Matrix p(field, complement.cols(), total_dim);
    for (int r = 0; r < complement.cols(); ++r)
      for (int c = 0; c < total_dim; ++c) p.set(r, c, inv.at(image.cols() + r, c));
    proj[i] = std::move(p);
    section[i] = std::move(complement);
    dims[i] = section[i].cols();
  }
  std::vector<std::vector<Matrix>> steps(box.n(), std::vector<Matrix>(count, Matrix(field, 0, 0)));
  Degree d = box.low();
  std::int64_t idx = 0;
  do {
    for (int i = 0; i < box.n(); ++i) {
      if (d[i] >= box.high()[i]) continue;
      std::int64_t head = box.index_of(d.plus_axis(i));
      steps[i][idx] = proj[head] * (total.step_in_box(idx, i) * section[idx]);
    }
    ++idx;
  } while (box.next_point(d));
  GridModule q(field, box, std::move(dims), std::move(steps));
  return {std::move(q), std::move(proj), std::move(section)};
}

}  // namespace detail

/// Pointwise cokernel with its projection.
inline CokernelResult cokernel_of(const GridMorphism& f) {
  const GridModule& target = f.target();
  std::int64_t count = target.box().point_count();
  std::vector<Matrix> span;
  span.reserve(count);
  for (std::int64_t i = 0; i < count; ++i) span.push_back(f.block_in_box(i));
  detail::QuotientData q = detail::pointwise_quotient(target, span);
  GridMorphism epi(target, q.module, std::move(q.proj));
  return {std::move(q.module), std::move(epi)};
}

struct DirectSum {
  GridModule module;
  std::vector<GridMorphism> injections;   // part k -> sum
  std::vector<GridMorphism> projections;  // sum -> part k
};

/// Direct sum over a common box (the hull of the parts' boxes).  The sum
/// of no modules is the zero module.
inline DirectSum direct_sum(const FieldSpec& field, int n, const std::vector<GridModule>& parts) {
  if (parts.empty()) {
    GridModule z = GridModule::zero(field, n);
    return {z, {}, {}};
  }
  Box box = parts[0].box();
  for (const GridModule& p : parts) {
    if (p.field() != field || p.n() != n) throw Error("direct_sum: incompatible part");
    box = Box::hull(box, p.box());
  }
  std::vector<GridModule> ext;
  ext.reserve(parts.size());
  for (const GridModule& p : parts) ext.push_back(extend_box(p, box));

  std::int64_t count = box.point_count();
  std::vector<int> dims(count, 0);
  for (const GridModule& p : ext)
    for (std::int64_t i = 0; i < count; ++i) dims[i] += p.dim_in_box(i);

  std::vector<std::vector<Matrix>> steps(box.n(), std::vector<Matrix>(count, Matrix(field, 0, 0)));
  Degree d = box.low();
  std::int64_t idx = 0;
  do {
    for (int i = 0; i < box.n(); ++i) {
      if (d[i] >= box.high()[i]) continue;
      std::int64_t head = box.index_of(d.plus_axis(i));
      Matrix block(field, dims[head], dims[idx]);
      int row_off = 0, col_off = 0;
      for (const GridModule& p : ext) {
        const Matrix& s = p.step_in_box(idx, i);
        for (int r = 0; r < s.rows(); ++r)
          for (const auto& [c, v] : s.row_entries(r)) block.set(row_off + r, col_off + c, v);
        row_off += p.dim_in_box(head);
        col_off += p.dim_in_box(idx);
      }
      steps[i][idx] = std::move(block);
    }
    ++idx;
  } while (box.next_point(d));
  GridModule sum(field, box, dims, std::move(steps));

  DirectSum out{sum, {}, {}};
  for (std::size_t k = 0; k < ext.size(); ++k) {
    std::vector<Matrix> inj_blocks, proj_blocks;
    inj_blocks.reserve(count);
    proj_blocks.reserve(count);
    for (std::int64_t i = 0; i < count; ++i) {
      int off = 0;
      for (std::size_t k2 = 0; k2 < k; ++k2) off += ext[k2].dim_in_box(i);
      int pd = ext[k].dim_in_box(i);
      Matrix inj(field, dims[i], pd);
      Matrix proj(field, pd, dims[i]);
      for (int r = 0; r < pd; ++r) {
        inj.set(off + r, r, field.one());
        proj.set(r, off + r, field.one());
      }
      inj_blocks.push_back(std::move(inj));
      proj_blocks.push_back(std::move(proj));
    }
    out.injections.push_back(GridMorphism(ext[k], sum, std::move(inj_blocks)));
    out.projections.push_back(GridMorphism(sum, ext[k], std::move(proj_blocks)));
  }
  return out;
}

/// Basis of the space of all natural maps M -> N over one common box.
/// Unknowns are the block entries ordered by (point index, target row,
/// source column); the basis is the deterministic kernel_basis of the
/// naturality constraint system, so repeated calls agree exactly.
inline std::vector<GridMorphism> nat_hom_basis(const GridModule& m, const GridModule& nmod) {
  if (m.box() != nmod.box()) throw Error("nat_hom_basis: modules must share a box");
  if (m.field() != nmod.field()) throw Error("nat_hom_basis: field mismatch");
  const Box& box = m.box();
  const FieldSpec& field = m.field();
  std::int64_t count = box.point_count();

  std::vector<std::int64_t> var_offset(count + 1, 0);
  for (std::int64_t i = 0; i < count; ++i)
    var_offset[i + 1] = var_offset[i] + std::int64_t(nmod.dim_in_box(i)) * m.dim_in_box(i);
  std::int64_t num_vars = var_offset[count];
  auto var = [&](std::int64_t idx, int row, int col) {
    return var_offset[idx] + std::int64_t(row) * m.dim_in_box(idx) + col;
  };

  // One constraint row per (edge, target row at head, source column at tail).
  std::vector<std::vector<std::pair<std::int64_t, Scalar>>> constraints;
  Degree d = box.low();
  std::int64_t idx = 0;
  do {
    for (int i = 0; i < box.n(); ++i) {
      if (d[i] >= box.high()[i]) continue;
      std::int64_t head = box.index_of(d.plus_axis(i));
      const Matrix& ms = m.step_in_box(idx, i);
      const Matrix& ns = nmod.step_in_box(idx, i);
      for (int a = 0; a < nmod.dim_in_box(head); ++a) {
        for (int b = 0; b < m.dim_in_box(idx); ++b) {
          std::vector<std::pair<std::int64_t, Scalar>> row;
          for (int c = 0; c < m.dim_in_box(head); ++c) {
            const Scalar& v = ms.at(c, b);
            if (!field.is_zero(v)) row.push_back({var(head, a, c), v});
          }
          for (int c = 0; c < nmod.dim_in_box(idx); ++c) {
            const Scalar& v = ns.at(a, c);
            if (field.is_zero(v)) continue;
            row.push_back({var(idx, c, b), field.neg(v)});
          }
          if (!row.empty()) constraints.push_back(std::move(row));
        }
      }
    }
    ++idx;
  } while (box.next_point(d));

  Matrix system(field, static_cast<int>(constraints.size()), static_cast<int>(num_vars));
  for (int r = 0; r < static_cast<int>(constraints.size()); ++r)
    for (const auto& [v, s] : constraints[r]) {
      system.set(r, static_cast<int>(v), field.add(system.at(r, static_cast<int>(v)), s));
    }
  Matrix basis = kernel_basis(system);

  std::vector<GridMorphism> out;
  out.reserve(basis.cols());
  for (int j = 0; j < basis.cols(); ++j) {
    std::vector<Matrix> blocks;
    blocks.reserve(count);
    for (std::int64_t i = 0; i < count; ++i) {
      Matrix block(field, nmod.dim_in_box(i), m.dim_in_box(i));
      for (int r = 0; r < block.rows(); ++r)
        for (int c = 0; c < block.cols(); ++c)
          block.set(r, c, basis.at(static_cast<int>(var(i, r, c)), j));
      blocks.push_back(std::move(block));
    }
    out.push_back(GridMorphism(m, nmod, std::move(blocks)));
  }
  return out;
}

}  // namespace flange
