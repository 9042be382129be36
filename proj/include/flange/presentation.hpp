// The graded presentation text format: parsing with positioned errors,
// canonical serialization, and realization as a grid module.
#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flange/degree.hpp"
#include "flange/error.hpp"
#include "flange/field.hpp"
#include "flange/grid_morphism.hpp"
#include "flange/resolve.hpp"

namespace flange {

/// A finite graded presentation: generators with degrees, and relations,
/// each a degree plus one coefficient per generator.
struct Presentation {
  int n = 1;
  FieldSpec field{2};
  std::vector<Degree> gens;
  struct Relation {
    Degree degree;
    std::vector<Scalar> coeffs;
    friend bool operator==(const Relation&, const Relation&) = default;
  };
  std::vector<Relation> rels;

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

namespace detail {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

inline std::vector<Token> tokenize_presentation(std::string_view text) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++column;
      ++i;
      continue;
    }
    Token t{"", line, column};
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '#') {
      t.text += text[i];
      ++i;
      ++column;
    }
    out.push_back(std::move(t));
  }
  return out;
}

class TokenReader {
 public:
  explicit TokenReader(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Token next(const std::string& expected) {
    if (pos_ >= tokens_.size()) {
      Token last = tokens_.empty() ? Token{"", 1, 1} : tokens_.back();
      throw ParseError(last.line, last.column + static_cast<int>(last.text.size()), expected);
    }
    return tokens_[pos_++];
  }

  void expect_keyword(const std::string& word) {
    Token t = next("keyword '" + word + "'");
    if (t.text != word) throw ParseError(t.line, t.column, "keyword '" + word + "'");
  }

  /// Consume an integer token; returns the value and its position.
  std::pair<std::int64_t, Token> expect_int(const std::string& what) {
    Token t = next(what);
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(t.text, &used);
    } catch (const std::exception&) {
      throw ParseError(t.line, t.column, what);
    }
    if (used != t.text.size()) throw ParseError(t.line, t.column, what);
    return {v, t};
  }

  Scalar expect_scalar(const FieldSpec& field, const std::string& what) {
    Token t = next(what);
    try {
      std::size_t slash = t.text.find('/');
      if (slash == std::string::npos) {
        std::size_t used = 0;
        std::int64_t v = std::stoll(t.text, &used);
        if (used != t.text.size()) throw Error("trailing characters");
        return field.from_int(v);
      }
      std::size_t used = 0;
      std::int64_t num = std::stoll(t.text.substr(0, slash), &used);
      if (used != slash) throw Error("trailing characters");
      std::string den_text = t.text.substr(slash + 1);
      std::int64_t den = std::stoll(den_text, &used);
      if (used != den_text.size()) throw Error("trailing characters");
      return field.make(num, den);
    } catch (const std::exception&) {
      throw ParseError(t.line, t.column, what);
    }
  }

  void expect_end() {
    if (pos_ < tokens_.size())
      throw ParseError(tokens_[pos_].line, tokens_[pos_].column, "end of input");
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse the presentation format.  Grammar, with '#' comments allowed
/// anywhere:
///   pmod <n> <p>
///   gens <k>
///   <k rows of n integers>
///   rels <m>
///   <m rows of n integers followed by k scalars>
/// Scalars are integers or num/den fractions.  Throws ParseError with
/// line/column on malformed input and DegreeViolation when a nonzero
/// coefficient pairs a relation with a generator whose degree is not
/// componentwise below the relation's.
inline Presentation parse_presentation(std::string_view text) {
  detail::TokenReader reader(detail::tokenize_presentation(text));
  Presentation p;

  reader.expect_keyword("pmod");
  auto [n, n_tok] = reader.expect_int("number of parameters (an integer)");
  if (n < 1 || n > 16) throw ParseError(n_tok.line, n_tok.column, "number of parameters in [1, 16]");
  p.n = static_cast<int>(n);
  auto [chr, chr_tok] = reader.expect_int("field characteristic (0 or a prime)");
  try {
    p.field = FieldSpec(chr);
  } catch (const Error&) {
    throw ParseError(chr_tok.line, chr_tok.column, "field characteristic (0 or a prime)");
  }

  reader.expect_keyword("gens");
  auto [k, k_tok] = reader.expect_int("generator count (a nonnegative integer)");
  if (k < 0) throw ParseError(k_tok.line, k_tok.column, "generator count (a nonnegative integer)");
  for (std::int64_t g = 0; g < k; ++g) {
    Degree d = Degree::zero(p.n);
    for (int i = 0; i < p.n; ++i)
      d[i] = static_cast<int>(reader.expect_int("generator degree coordinate").first);
    p.gens.push_back(std::move(d));
  }

  reader.expect_keyword("rels");
  auto [m, m_tok] = reader.expect_int("relation count (a nonnegative integer)");
  if (m < 0) throw ParseError(m_tok.line, m_tok.column, "relation count (a nonnegative integer)");
  for (std::int64_t r = 0; r < m; ++r) {
    Presentation::Relation rel;
    rel.degree = Degree::zero(p.n);
    for (int i = 0; i < p.n; ++i)
      rel.degree[i] = static_cast<int>(reader.expect_int("relation degree coordinate").first);
    for (std::int64_t g = 0; g < k; ++g)
      rel.coeffs.push_back(reader.expect_scalar(p.field, "relation coefficient"));
    for (std::int64_t g = 0; g < k; ++g) {
      if (!p.field.is_zero(rel.coeffs[g]) && !p.gens[g].leq(rel.degree))
        throw DegreeViolation("relation " + std::to_string(r + 1) + " at degree " +
                              to_string(rel.degree) + " uses generator " + std::to_string(g + 1) +
                              " of degree " + to_string(p.gens[g]) +
                              ", which is not componentwise below it");
    }
    p.rels.push_back(std::move(rel));
  }

  reader.expect_end();
  return p;
}

/// Canonical serialization: single spaces, one row per generator or
/// relation, trailing newline, no comments.  parse(serialize(p)) == p.
inline std::string serialize_presentation(const Presentation& p) {
  std::string out = "pmod " + std::to_string(p.n) + " " +
                    std::to_string(p.field.characteristic()) + "\n";
  out += "gens " + std::to_string(p.gens.size()) + "\n";
  for (const Degree& g : p.gens) {
    for (int i = 0; i < p.n; ++i) out += (i ? " " : "") + std::to_string(g[i]);
    out += "\n";
  }
  out += "rels " + std::to_string(p.rels.size()) + "\n";
  for (const Presentation::Relation& r : p.rels) {
    for (int i = 0; i < p.n; ++i) out += (i ? " " : "") + std::to_string(r.degree[i]);
    for (const Scalar& c : r.coeffs) out += " " + to_string(c);
    out += "\n";
  }
  return out;
}

/// Realize a presentation as a grid module: the pointwise cokernel of the
/// relation map between the free modules on the relation and generator
/// degrees.  The box spans [min generator - 1, max degree + 1] so that it
/// determines the module; an empty presentation realizes to zero.
inline GridModule realize_presentation(const Presentation& p) {
  if (p.gens.empty()) return GridModule::zero(p.field, p.n);
  Degree lo = p.gens[0], hi = p.gens[0];
  for (const Degree& g : p.gens)
    for (int i = 0; i < p.n; ++i) {
      lo[i] = std::min(lo[i], g[i]);
      hi[i] = std::max(hi[i], g[i]);
    }
  for (const Presentation::Relation& r : p.rels)
    for (int i = 0; i < p.n; ++i) {
      lo[i] = std::min(lo[i], r.degree[i]);
      hi[i] = std::max(hi[i], r.degree[i]);
    }
  Degree ones(std::vector<int>(p.n, 1));
  Box box(lo - ones, hi + ones);

  std::vector<GridModule> gen_parts, rel_parts;
  for (const Degree& g : p.gens)
    gen_parts.push_back(standard_module(Summand(SummandKind::flat, g, Face::none()), box, p.field));
  for (const Presentation::Relation& r : p.rels)
    rel_parts.push_back(
        standard_module(Summand(SummandKind::flat, r.degree, Face::none()), box, p.field));
  DirectSum free_gens = direct_sum(p.field, p.n, gen_parts);
  // No relations: the module is the free module on the generators.
  if (rel_parts.empty()) return free_gens.module;
  DirectSum free_rels = direct_sum(p.field, p.n, rel_parts);

  std::vector<Matrix> blocks;
  blocks.reserve(box.point_count());
  Degree q = box.low();
  do {
    Matrix block(p.field, free_gens.module.dim_at(q), free_rels.module.dim_at(q));
    int col = 0;
    for (std::size_t j = 0; j < p.rels.size(); ++j) {
      if (!p.rels[j].degree.leq(q)) continue;
      int row = 0;
      for (std::size_t i = 0; i < p.gens.size(); ++i) {
        if (!p.gens[i].leq(q)) continue;
        block.set(row, col, p.rels[j].coeffs[i]);
        ++row;
      }
      ++col;
    }
    blocks.push_back(std::move(block));
  } while (box.next_point(q));
  GridMorphism relation_map(free_rels.module, free_gens.module, std::move(blocks));
  return cokernel_of(relation_map).module;
}

}  // namespace flange
