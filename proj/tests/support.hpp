// Shared helpers for the test suites.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "flange/flange.hpp"

namespace testsupport {

using namespace flange;

inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

inline Matrix random_matrix(const FieldSpec& field, int rows, int cols, std::mt19937_64& rng) {
  Matrix m(field, rows, cols);
  std::int64_t p = field.characteristic() == 0 ? 5 : field.characteristic();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      std::int64_t v = static_cast<std::int64_t>(draw(rng, p));
      if (field.characteristic() == 0) v -= 2;
      m.set(r, c, field.from_int(v));
    }
  return m;
}

inline std::vector<Scalar> random_vector(const FieldSpec& field, int len, std::mt19937_64& rng) {
  std::vector<Scalar> v(len, field.zero());
  std::int64_t p = field.characteristic() == 0 ? 5 : field.characteristic();
  for (int i = 0; i < len; ++i) {
    std::int64_t x = static_cast<std::int64_t>(draw(rng, p));
    if (field.characteristic() == 0) x -= 2;
    v[i] = field.from_int(x);
  }
  return v;
}

/// Standard desk-scale generator parameters used across the suites.
inline GenParams desk_params(int n, std::uint64_t seed, GenKind kind = GenKind::interval_sum,
                             std::int64_t p = 2) {
  GenParams params;
  params.n = n;
  params.box_width = 3;
  params.max_dim = 3;
  params.field = FieldSpec(p);
  params.seed = seed;
  params.kind = kind;
  return params;
}

/// Rotate through the generator kinds for variety in random suites.
inline GenKind kind_for(std::uint64_t i) {
  switch (i % 3) {
    case 0: return GenKind::interval_sum;
    case 1: return GenKind::presentation;
    default: return GenKind::dual;
  }
}

}  // namespace testsupport
