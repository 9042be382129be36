// Grid module category: standard indicator modules, shifts, direct sums,
// box extension, Hom spaces, kernels, cokernels, and validation.
#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <vector>

#include "support.hpp"

using namespace flange;
using testsupport::desk_params;
using testsupport::kind_for;

namespace {

// The interval module k[b, d) on a one-parameter box: dimension one on
// [b, d), identity steps inside the interval, zero across its ends.
GridModule interval_module(const FieldSpec& field, int b, int d, const Box& box) {
  auto inside = [&](const Degree& q) { return q[0] >= b && q[0] < d; };
  return GridModule::build(
      field, box, [&](const Degree& q) { return inside(q) ? 1 : 0; },
      [&](const Degree& q, int axis) {
        bool tail = inside(q), head = inside(q.plus_axis(axis));
        Matrix m(field, head ? 1 : 0, tail ? 1 : 0);
        if (head && tail) m.set(0, 0, field.one());
        return m;
      });
}

// All blocks of a morphism, flattened to one coefficient column.
std::vector<Scalar> flatten(const GridMorphism& f) {
  std::vector<Scalar> out;
  for (std::int64_t i = 0; i < f.source().box().point_count(); ++i) {
    const Matrix& b = f.block_in_box(i);
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) out.push_back(b.at(r, c));
  }
  return out;
}

// Is f a field-linear combination of the given morphisms?
bool in_span(const GridMorphism& f, const std::vector<GridMorphism>& basis) {
  std::vector<Scalar> target = flatten(f);
  Matrix a(f.source().field(), static_cast<int>(target.size()), static_cast<int>(basis.size()));
  for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
    std::vector<Scalar> col = flatten(basis[j]);
    REQUIRE(col.size() == target.size());
    for (int r = 0; r < static_cast<int>(col.size()); ++r) a.set(r, j, col[r]);
  }
  return solve(a, target).has_value();
}

std::vector<int> dims_of(const GridModule& m) {
  std::vector<int> out;
  for (std::int64_t i = 0; i < m.box().point_count(); ++i) out.push_back(m.dim_in_box(i));
  return out;
}

}  // namespace

TEST_CASE("standard module: the free module on a line") {
  FieldSpec f2(2);
  Box box(Degree{-2}, Degree{2});
  GridModule r = standard_module({SummandKind::flat, Degree{0}, Face::none()}, box, f2);

  CHECK(dims_of(r) == std::vector<int>{0, 0, 1, 1, 1});
  // Steps leaving -2,-1,0,1 have shapes 0x0, 1x0, 1x1, 1x1; the in-set
  // ones are scalar 1.
  CHECK(r.step_in_box(box.index_of(Degree{-2}), 0).rows() == 0);
  CHECK(r.step_in_box(box.index_of(Degree{-1}), 0).cols() == 0);
  CHECK(r.step_in_box(box.index_of(Degree{0}), 0).is_identity());
  CHECK(r.step_in_box(box.index_of(Degree{1}), 0).is_identity());
  CHECK(validate(r).ok());
}

TEST_CASE("standard module: the injective hull of the residue field on a line") {
  FieldSpec f2(2);
  Box box(Degree{-2}, Degree{2});
  GridModule e = standard_module({SummandKind::injective, Degree{0}, Face::none()}, box, f2);

  CHECK(dims_of(e) == std::vector<int>{1, 1, 1, 0, 0});
  CHECK(e.step_in_box(box.index_of(Degree{-2}), 0).is_identity());
  CHECK(e.step_in_box(box.index_of(Degree{-1}), 0).is_identity());
  CHECK(e.step_in_box(box.index_of(Degree{0}), 0).rows() == 0);
  CHECK(validate(e).ok());
}

TEST_CASE("standard module: the full line is constant with identity steps") {
  FieldSpec f2(2);
  Box box(Degree{-2}, Degree{2});
  GridModule line = standard_module({SummandKind::flat, Degree{0}, Face::axis(0)}, box, f2);

  CHECK(dims_of(line) == std::vector<int>{1, 1, 1, 1, 1});
  for (int q = -2; q < 2; ++q)
    CHECK(line.step_in_box(box.index_of(Degree{q}), 0).is_identity());

  // The injective summand on the same full face is the same module.
  GridModule line2 = standard_module({SummandKind::injective, Degree{0}, Face::axis(0)}, box, f2);
  CHECK(line == line2);
}

TEST_CASE("standard module: degrees on the box edge are rejected") {
  FieldSpec f2(2);
  CHECK_THROWS_AS(standard_module({SummandKind::flat, Degree{0}, Face::none()},
                                  Box(Degree{0}, Degree{2}), f2),
                  BoxNotDetermining);
  CHECK_THROWS_AS(standard_module({SummandKind::injective, Degree{2}, Face::none()},
                                  Box(Degree{0}, Degree{2}), f2),
                  BoxNotDetermining);
  // Axes on the face are exempt: only the off-face coordinates matter.
  CHECK_NOTHROW(standard_module({SummandKind::flat, Degree{0, 0}, Face::axis(0)},
                                Box(Degree{0, -1}, Degree{1, 1}), f2));
  CHECK_THROWS_AS(standard_module({SummandKind::flat, Degree{0, 0}, Face::axis(0)},
                                  Box(Degree{0, 0}, Degree{1, 1}), f2),
                  BoxNotDetermining);
}

TEST_CASE("shift: translation of the grading") {
  FieldSpec f2(2);
  Box box(Degree{-2}, Degree{2});
  GridModule r = standard_module({SummandKind::flat, Degree{0}, Face::none()}, box, f2);

  SECTION("shift by zero is the identity") { CHECK(shift(r, Degree{0}) == r); }

  SECTION("shifting the free module produces the shifted standard module") {
    // Values of shift(m, a) at q are values of m at q + a, so shifting R
    // by -1 supports {q : q >= 1} on the translated box.
    GridModule s = shift(r, Degree{-1});
    CHECK(s.box() == Box(Degree{-1}, Degree{3}));
    CHECK(s == standard_module({SummandKind::flat, Degree{1}, Face::none()},
                               Box(Degree{-1}, Degree{3}), f2));
  }

  SECTION("round trip") {
    GridModule m = random_module(desk_params(2, 42, GenKind::presentation));
    CHECK(shift(shift(m, Degree{3, -1}), Degree{-3, 1}) == m);
  }
}

TEST_CASE("direct sum") {
  FieldSpec f2(2);
  Box box(Degree{-1}, Degree{3});

  SECTION("empty sum is the zero module") {
    DirectSum s = direct_sum(f2, 1, {});
    CHECK(s.module.is_zero_module());
    CHECK(s.injections.empty());
  }

  SECTION("summing with zero keeps the dimension vector") {
    GridModule m = interval_module(f2, 0, 2, box);
    DirectSum s = direct_sum(f2, 1, {m, GridModule::zero(f2, 1)});
    CHECK(dimension_vector(s.module) == dimension_vector(extend_box(m, s.module.box())));
    CHECK(is_iso(s.injections[0]));
    CHECK(is_epi(s.projections[0]));
  }

  SECTION("two overlapping intervals add pointwise") {
    GridModule a = interval_module(f2, 0, 2, box);
    GridModule b = interval_module(f2, 1, 3, box);
    DirectSum s = direct_sum(f2, 1, {a, b});
    CHECK(s.module.dim_at(Degree{1}) == 2);
    CHECK(s.module.dim_at(Degree{0}) == 1);
    CHECK(s.module.dim_at(Degree{2}) == 1);
    CHECK(validate(s.module).ok());

    // Biproduct identities: proj_i . inj_i = id, proj_i . inj_j = 0.
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        GridMorphism c = compose(s.projections[i], s.injections[j]);
        if (i == j)
          CHECK(c == GridMorphism::identity(c.source()));
        else
          CHECK(c.is_zero());
      }
  }

  SECTION("parts on different boxes are harmonized to the hull") {
    GridModule a = interval_module(f2, 0, 2, Box(Degree{-1}, Degree{2}));
    GridModule b = interval_module(f2, 1, 3, Box(Degree{0}, Degree{4}));
    DirectSum s = direct_sum(f2, 1, {a, b});
    CHECK(s.module.box() == Box(Degree{-1}, Degree{4}));
    CHECK(s.module.dim_at(Degree{1}) == 2);
  }
}

TEST_CASE("extend box realizes clamp semantics") {
  FieldSpec f2(2);
  GridModule e =
      standard_module({SummandKind::injective, Degree{0}, Face::none()}, Box(Degree{-1}, Degree{1}), f2);

  SECTION("extending to the same box changes nothing") {
    CHECK(extend_box(e, e.box()) == e);
  }

  SECTION("a downset extends constantly to the left") {
    GridModule big = extend_box(e, Box(Degree{-3}, Degree{1}));
    CHECK(dims_of(big) == std::vector<int>{1, 1, 1, 1, 0});
    CHECK(big.step_in_box(0, 0).is_identity());
    CHECK(big.step_in_box(1, 0).is_identity());
    CHECK(validate(big).ok());
  }

  SECTION("extending twice equals extending once") {
    GridModule m = random_module(desk_params(2, 7, GenKind::presentation));
    Box mid = m.box().padded(1), big = m.box().padded(3);
    CHECK(extend_box(extend_box(m, mid), big) == extend_box(m, big));
    // Clamp evaluation is unchanged at every point of the big box.
    Degree q = big.low();
    do {
      CHECK(extend_box(m, big).dim_at(q) == m.dim_at(q));
    } while (big.next_point(q));
  }
}

TEST_CASE("hom spaces via the naturality constraint system") {
  FieldSpec f2(2);
  Box box(Degree{-2}, Degree{2});
  GridModule r = standard_module({SummandKind::flat, Degree{0}, Face::none()}, box, f2);
  GridModule e = standard_module({SummandKind::injective, Degree{0}, Face::none()}, box, f2);

  SECTION("endomorphisms of the free module are the scalars") {
    std::vector<GridMorphism> basis = nat_hom_basis(r, r);
    REQUIRE(basis.size() == 1);
    CHECK(validate(basis[0]).ok());
    CHECK(in_span(GridMorphism::identity(r), basis));
  }

  SECTION("no nonzero maps out of the downset into the upset") {
    CHECK(nat_hom_basis(e, r).empty());
  }

  SECTION("every endomorphism space contains the identity") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      GridModule m = random_module(desk_params(2, seed, kind_for(seed)));
      std::vector<GridMorphism> basis = nat_hom_basis(m, m);
      for (const GridMorphism& b : basis) CHECK(validate(b).ok());
      CHECK(in_span(GridMorphism::identity(m), basis));
    }
  }

  SECTION("maps between intervals exist only toward the earlier interval") {
    GridModule a = interval_module(f2, 0, 2, box);
    GridModule b = interval_module(f2, 1, 3, box);
    // k[1,3) -> k[0,2) acts on the overlap [1,2); the other direction is
    // forced to zero because the target is dead where the source is born.
    CHECK(nat_hom_basis(b, a).size() == 1);
    CHECK(nat_hom_basis(a, b).empty());
  }
}

TEST_CASE("kernels") {
  FieldSpec f2(2);
  Box box(Degree{-2}, Degree{2});
  GridModule r = standard_module({SummandKind::flat, Degree{0}, Face::none()}, box, f2);

  SECTION("kernel of the identity is zero") {
    KernelResult k = kernel_of(GridMorphism::identity(r));
    CHECK(k.module.is_zero_module());
  }

  SECTION("kernel of the zero map is the source") {
    GridModule e = standard_module({SummandKind::injective, Degree{0}, Face::none()}, box, f2);
    KernelResult k = kernel_of(GridMorphism::zero(r, e));
    CHECK(dimension_vector(k.module) == dimension_vector(r));
    CHECK(is_iso(k.mono));  // everything survives, so the inclusion is onto
    CHECK(validate(k.module).ok());
  }

  SECTION("kernel of the surjection onto a short interval") {
    GridModule quot = interval_module(f2, 0, 1, box);
    std::vector<Matrix> blocks;
    Degree q = box.low();
    do {
      Matrix blk(f2, quot.dim_at(q), r.dim_at(q));
      if (q[0] == 0) blk.set(0, 0, f2.one());
      blocks.push_back(blk);
    } while (box.next_point(q));
    GridMorphism f(r, quot, blocks);
    REQUIRE(validate(f).ok());
    REQUIRE(is_epi(f));

    KernelResult k = kernel_of(f);
    std::map<Degree, int> expect{{Degree{-2}, 0}, {Degree{-1}, 0}, {Degree{0}, 0},
                                 {Degree{1}, 1},  {Degree{2}, 1}};
    CHECK(dimension_vector(k.module) == expect);
    CHECK(is_mono(k.mono));
    CHECK(compose(f, k.mono).is_zero());
    CHECK(validate(k.module).ok());
  }
}

TEST_CASE("cokernels") {
  FieldSpec f2(2);
  Box box(Degree{-2}, Degree{2});
  GridModule r = standard_module({SummandKind::flat, Degree{0}, Face::none()}, box, f2);
  GridModule r1 = standard_module({SummandKind::flat, Degree{1}, Face::none()}, box, f2);

  SECTION("cokernel of the identity is zero") {
    CokernelResult c = cokernel_of(GridMorphism::identity(r));
    CHECK(c.module.is_zero_module());
  }

  SECTION("cokernel of the zero map is the target") {
    CokernelResult c = cokernel_of(GridMorphism::zero(r1, r));
    CHECK(dimension_vector(c.module) == dimension_vector(r));
    CHECK(is_epi(c.epi));
    CHECK(validate(c.module).ok());
  }

  SECTION("multiplication into the free module leaves one simple class") {
    // The inclusion of the shifted free module: scalar 1 wherever both
    // sides are nonzero.
    std::vector<Matrix> blocks;
    Degree q = box.low();
    do {
      Matrix blk(f2, r.dim_at(q), r1.dim_at(q));
      if (blk.rows() == 1 && blk.cols() == 1) blk.set(0, 0, f2.one());
      blocks.push_back(blk);
    } while (box.next_point(q));
    GridMorphism x(r1, r, blocks);
    REQUIRE(validate(x).ok());
    REQUIRE(is_mono(x));

    CokernelResult c = cokernel_of(x);
    std::map<Degree, int> expect{{Degree{-2}, 0}, {Degree{-1}, 0}, {Degree{0}, 1},
                                 {Degree{1}, 0},  {Degree{2}, 0}};
    CHECK(dimension_vector(c.module) == expect);
    CHECK(compose(c.epi, x).is_zero());
    CHECK(validate(c.module).ok());
  }
}

TEST_CASE("isomorphism test") {
  FieldSpec f2(2);
  Box box(Degree{-2}, Degree{2});
  GridModule r = standard_module({SummandKind::flat, Degree{0}, Face::none()}, box, f2);
  CHECK(is_iso(GridMorphism::identity(r)));
  CHECK(!is_iso(GridMorphism::zero(r, r)));
  CHECK(is_iso(GridMorphism::zero(GridModule::zero(f2, 1), GridModule::zero(f2, 1))));
}

TEST_CASE("dimension vector") {
  FieldSpec f2(2);

  SECTION("zero module") {
    std::map<Degree, int> dv = dimension_vector(GridModule::zero(f2, 2));
    REQUIRE(dv.size() == 1);
    CHECK(dv.at(Degree{0, 0}) == 0);
  }

  SECTION("a planar downset is constantly one below its apex") {
    GridModule e = standard_module({SummandKind::injective, Degree{0, 0}, Face::none()},
                                   Box(Degree{-2, -2}, Degree{1, 1}), f2);
    Box below(Degree{-2, -2}, Degree{0, 0});
    Degree q = below.low();
    do {
      CHECK(e.dim_at(q) == 1);
    } while (below.next_point(q));
  }

  SECTION("sums add pointwise") {
    Box box(Degree{-1}, Degree{3});
    GridModule a = interval_module(f2, 0, 2, box);
    GridModule b = interval_module(f2, 1, 3, box);
    DirectSum s = direct_sum(f2, 1, {a, b});
    std::map<Degree, int> da = dimension_vector(a), db = dimension_vector(b),
                          ds = dimension_vector(s.module);
    for (const auto& [q, d] : ds) CHECK(d == da.at(q) + db.at(q));
  }
}

TEST_CASE("validation finds exactly the broken square") {
  FieldSpec f2(2);
  Box box(Degree{0, 0}, Degree{1, 1});
  GridModule plane = standard_module({SummandKind::flat, Degree{0, 0}, Face::all(2)}, box, f2);
  REQUIRE(validate(plane).ok());

  // Break the single square by zeroing one edge map.
  GridModule broken = GridModule::build(
      f2, box, [&](const Degree& q) { return plane.dim_at(q); },
      [&](const Degree& q, int axis) {
        if (q == Degree{0, 0} && axis == 0) return Matrix(f2, 1, 1);
        return plane.step(q, axis);
      });
  ValidationReport rep = validate(broken);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].at == Degree{0, 0});

  // Generator outputs are always coherent.
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    GridModule m = random_module(desk_params(1 + static_cast<int>(seed % 3), seed, kind_for(seed)));
    CHECK(validate(m).ok());
  }
}

TEST_CASE("kernels and cokernels keep exact pointwise rank bookkeeping") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GenParams pa = desk_params(2, 100 + seed, kind_for(seed));
    GenParams pb = desk_params(2, 200 + seed, kind_for(seed + 1));
    GridModule a = random_module(pa), b = random_module(pb);
    Box box = Box::hull(a.box(), b.box());
    a = extend_box(a, box);
    b = extend_box(b, box);

    std::vector<GridMorphism> homs = nat_hom_basis(a, b);
    if (homs.empty()) continue;
    const GridMorphism& f = homs[static_cast<std::size_t>(seed) % homs.size()];
    REQUIRE(validate(f).ok());

    KernelResult k = kernel_of(f);
    CokernelResult c = cokernel_of(f);
    CHECK(validate(k.module).ok());
    CHECK(validate(c.module).ok());
    CHECK(validate(k.mono).ok());
    CHECK(validate(c.epi).ok());

    for (std::int64_t i = 0; i < box.point_count(); ++i) {
      int rank = rank_of(f.block_in_box(i));
      CHECK(a.dim_in_box(i) == k.module.dim_in_box(i) + rank);
      CHECK(b.dim_in_box(i) == c.module.dim_in_box(i) + rank);
    }
  }
}

TEST_CASE("hom spaces have the same dimension as for the dualized pair") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    GridModule a = random_module(desk_params(2, 300 + seed, kind_for(seed)));
    GridModule b = random_module(desk_params(2, 400 + seed, kind_for(seed + 2)));
    Box box = Box::hull(a.box(), b.box());
    a = extend_box(a, box);
    b = extend_box(b, box);
    std::size_t forward = nat_hom_basis(a, b).size();
    std::size_t backward = nat_hom_basis(matlis_dual(b), matlis_dual(a)).size();
    CHECK(forward == backward);
  }
}
