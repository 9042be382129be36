// Independent cross-checking tools: seeded random module generators, the
// classical one-parameter barcode via rank inclusion-exclusion, and the
// comparison of a module's flange against its barcode.  Nothing here
// reuses the hull/cover machinery.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "flange/functors.hpp"
#include "flange/grid_module.hpp"
#include "flange/presentation.hpp"
#include "flange/resolve.hpp"

namespace flange {

/// Direct sum of standard summand modules on a box.  A thin convenience
/// wrapper used by generators and tests.
inline GridModule interval_sum_module(const std::vector<Summand>& summands, const Box& box,
                                      const FieldSpec& field) {
  return realize_summands(field, box.n(), box, summands).realization;
}

enum class GenKind { interval_sum, presentation, dual };

inline std::string to_string(GenKind k) {
  switch (k) {
    case GenKind::interval_sum: return "interval_sum";
    case GenKind::presentation: return "presentation";
    default: return "dual";
  }
}

inline std::optional<GenKind> gen_kind_from_string(const std::string& s) {
  if (s == "interval_sum") return GenKind::interval_sum;
  if (s == "presentation") return GenKind::presentation;
  if (s == "dual") return GenKind::dual;
  return std::nullopt;
}

struct GenParams {
  int n = 2;
  int box_width = 3;   // box spans [0, box_width] per axis before padding
  int max_dim = 3;     // cap on the pointwise dimension
  FieldSpec field{2};
  std::uint64_t seed = 0;
  GenKind kind = GenKind::interval_sum;
};

namespace detail {

/// Deterministic bounded draw.  std::mt19937_64 has a fixed portable
/// stream; taking raw draws modulo the bound keeps results identical
/// across platforms (the std distributions are not portable).
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

inline GridModule random_interval_sum(const GenParams& params, std::mt19937_64& rng) {
  int w = std::max(2, params.box_width);
  Box box(Degree::zero(params.n), Degree(std::vector<int>(params.n, w)));
  int count = 1 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(std::max(1, params.max_dim))));
  std::vector<Summand> summands;
  for (int s = 0; s < count; ++s) {
    SummandKind kind = draw(rng, 2) ? SummandKind::injective : SummandKind::flat;
    Face face{static_cast<std::uint32_t>(draw(rng, std::uint64_t(1) << params.n))};
    Degree degree = Degree::zero(params.n);
    for (int i = 0; i < params.n; ++i)
      if (!face.contains(i)) degree[i] = 1 + static_cast<int>(draw(rng, w - 1));
    summands.push_back(Summand(kind, degree, face));
  }
  return interval_sum_module(summands, box, params.field);
}

inline GridModule random_presentation_module(const GenParams& params, std::mt19937_64& rng) {
  int w = std::max(2, params.box_width);
  Presentation p;
  p.n = params.n;
  p.field = params.field;
  int gens = 1 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(std::max(1, params.max_dim))));
  for (int g = 0; g < gens; ++g) {
    Degree d = Degree::zero(params.n);
    for (int i = 0; i < params.n; ++i) d[i] = static_cast<int>(draw(rng, w - 1));
    p.gens.push_back(std::move(d));
  }
  int rels = static_cast<int>(draw(rng, static_cast<std::uint64_t>(gens + params.n)));
  for (int r = 0; r < rels; ++r) {
    Presentation::Relation rel;
    rel.degree = p.gens[draw(rng, gens)];
    bool moved = false;
    for (int i = 0; i < params.n; ++i) {
      int delta = static_cast<int>(draw(rng, 2));
      if (rel.degree[i] + delta > w - 1) delta = 0;
      rel.degree[i] += delta;
      moved = moved || delta > 0;
    }
    if (!moved && rel.degree[0] < w - 1) ++rel.degree[0];
    for (int g = 0; g < gens; ++g) {
      if (p.gens[g].leq(rel.degree)) {
        std::int64_t c = params.field.is_rational()
                             ? static_cast<std::int64_t>(draw(rng, 5)) - 2
                             : static_cast<std::int64_t>(draw(rng, params.field.characteristic()));
        rel.coeffs.push_back(params.field.from_int(c));
      } else {
        rel.coeffs.push_back(params.field.zero());
      }
    }
    p.rels.push_back(std::move(rel));
  }
  return realize_presentation(p);
}

}  // namespace detail

/// Seeded random module.  Equal parameters give bit-identical results.
inline GridModule random_module(const GenParams& params) {
  if (params.n < 1 || params.n > 16) throw Error("random_module: n out of range");
  std::mt19937_64 rng(params.seed);
  switch (params.kind) {
    case GenKind::interval_sum:
      return detail::random_interval_sum(params, rng);
    case GenKind::presentation:
      return detail::random_presentation_module(params, rng);
    case GenKind::dual: {
      GenParams inner = params;
      inner.kind = detail::draw(rng, 2) ? GenKind::presentation : GenKind::interval_sum;
      inner.seed = rng();
      return matlis_dual(random_module(inner));
    }
  }
  throw Error("random_module: unknown kind");
}

/// One bar of a one-parameter barcode: the half-open interval
/// [left, right), with nullopt encoding an infinite end.
struct Bar {
  std::optional<int> left;
  std::optional<int> right;

  friend bool operator==(const Bar&, const Bar&) = default;
  friend bool operator<(const Bar& a, const Bar& b) {
    // -infinity first on the left, +infinity last on the right
    if (a.left != b.left) {
      if (!a.left) return true;
      if (!b.left) return false;
      return *a.left < *b.left;
    }
    if (a.right == b.right) return false;
    if (!a.right) return false;
    if (!b.right) return true;
    return *a.right < *b.right;
  }
};

inline std::string to_string(const Bar& b) {
  std::string s = "[";
  s += b.left ? std::to_string(*b.left) : "-inf";
  s += ", ";
  s += b.right ? std::to_string(*b.right) : "+inf";
  return s + ")";
}

/// A multiset of bars, sorted, with multiplicities.
struct Barcode {
  std::vector<std::pair<Bar, int>> bars;

  friend bool operator==(const Barcode&, const Barcode&) = default;
};

/// Classical interval decomposition of a one-parameter module by rank
/// inclusion-exclusion over the padded box.  A bar touching the padded
/// bottom is born at -infinity; one reaching past the padded top dies at
/// +infinity.  Throws WrongDimension unless n == 1.
inline Barcode barcode_1d(const GridModule& m, int pad = 1) {
  if (m.n() != 1) throw WrongDimension("barcode_1d needs a one-parameter module");
  Box padded = m.box().padded(pad);
  int lo = padded.low()[0], hi = padded.high()[0];
  int len = hi - lo + 1;

  // ranks[x][y] = rank of the transition from degree lo+x to degree lo+y.
  std::vector<std::vector<int>> ranks(len, std::vector<int>(len, 0));
  for (int x = 0; x < len; ++x) {
    Matrix acc = Matrix::identity(m.field(), m.dim_at(Degree{lo + x}));
    ranks[x][x] = rank_of(acc);
    for (int y = x + 1; y < len; ++y) {
      acc = m.step(Degree{lo + y - 1}, 0) * acc;
      ranks[x][y] = rank_of(acc);
    }
  }
  auto rank_at = [&](int x, int y) {
    if (x < 0 || y >= len || x > y) return 0;
    return ranks[x][y];
  };

  Barcode code;
  for (int x = 0; x < len; ++x) {
    for (int y = x; y < len; ++y) {
      int mult = rank_at(x, y) - rank_at(x - 1, y) - rank_at(x, y + 1) + rank_at(x - 1, y + 1);
      if (mult == 0) continue;
      Bar bar;
      if (x > 0) bar.left = lo + x;            // born at the padded bottom = -infinity
      if (y < len - 1) bar.right = lo + y + 1;  // survives past the padded top = +infinity
      code.bars.push_back({bar, mult});
    }
  }
  std::sort(code.bars.begin(), code.bars.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return code;
}

/// The summand multisets a barcode predicts for the flange of a
/// one-parameter module: each bar [b, d) needs the flat summand at b
/// (free line when b = -infinity) and the injective summand at d - 1
/// (co-free line when d = +infinity).
inline std::pair<std::vector<Summand>, std::vector<Summand>> barcode_flange_summands(
    const Barcode& code) {
  std::vector<Summand> cover, hull;
  for (const auto& [bar, mult] : code.bars) {
    for (int i = 0; i < mult; ++i) {
      cover.push_back(bar.left ? Summand(SummandKind::flat, Degree{*bar.left}, Face::none())
                               : Summand(SummandKind::flat, Degree{0}, Face::axis(0)));
      hull.push_back(bar.right ? Summand(SummandKind::injective, Degree{*bar.right - 1}, Face::none())
                               : Summand(SummandKind::injective, Degree{0}, Face::axis(0)));
    }
  }
  std::sort(cover.begin(), cover.end());
  std::sort(hull.begin(), hull.end());
  return {std::move(cover), std::move(hull)};
}

struct FlangeBarcodeReport {
  bool match = false;
  Barcode barcode;
  std::vector<Summand> cover_actual, cover_expected;
  std::vector<Summand> hull_actual, hull_expected;
};

/// Cross-check the flange of a one-parameter module against its barcode.
inline FlangeBarcodeReport flange_matches_barcode(const GridModule& m) {
  FlangeBarcodeReport report;
  report.barcode = barcode_1d(m);
  auto [cover_expected, hull_expected] = barcode_flange_summands(report.barcode);
  FlangePresentation fp = flange_presentation(m);
  report.cover_actual = fp.cover.cover.summands;
  report.hull_actual = fp.hull.hull.summands;
  report.cover_expected = std::move(cover_expected);
  report.hull_expected = std::move(hull_expected);
  report.match = report.cover_actual == report.cover_expected &&
                 report.hull_actual == report.hull_expected;
  return report;
}

}  // namespace flange
