#pragma once

#include "supnorm/lattice_counting.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <string>
#include <vector>

namespace supnorm {

struct AmplifierElement {
  IntCoords value{};
  std::vector<IntCoords> factors;  // the primes it is built from
};

// L1: primes with norm in [L, 2L]; L2: norm in [L^2, 4L^2];
// L3: l1 l2^2 with l1, l2 from L1; L4: l^2 with l from L2.
struct AmplifierSets {
  FieldContext ctx;
  Rational L;
  std::vector<std::int64_t> exclusions;
  std::array<std::vector<AmplifierElement>, 4> sets;
  std::vector<IntCoords> elements(int i) const;  // i in 1..4
};
AmplifierSets build_sets(const FieldContext& ctx, const Rational& L, const std::vector<std::int64_t>& exclusions);
nlohmann::json to_json(const AmplifierSets& s);

enum class CoeffMode { Matrix, Character, Trivial };
std::string to_string(CoeffMode m);
CoeffMode coeff_mode_from_string(const std::string& s);

struct GeometricQuery {
  NormFormSplit split;
  std::vector<Vec3> directions;  // unit for the embedded ternary form
  std::vector<int> m, l;         // one per embedding
  Rational L = 1;
  CoeffMode mode = CoeffMode::Trivial;
  std::vector<std::int64_t> exclusions;
};

struct GeometricTerm {
  int set = 0;  // 1..4
  IntCoords ell{};
  std::uint64_t count = 0;
  double weighted = 0;
};

struct GeometricReport {
  AmplifierSets sets;
  std::vector<GeometricTerm> terms;
  std::array<std::uint64_t, 4> S_count{};
  std::array<double, 4> S{};
  double prefactor = 1;  // |m|, or |m|^2 in character mode
  double B = 0;          // prefactor (1/L + sum_i L^{-2-i/2} S_i)
  double sqrtB = 0;
  std::uint64_t nodes = 0;
};
GeometricReport geometric_side(const GeometricQuery& q, const CountOptions& opt = {});
nlohmann::json to_json(const GeometricReport& r);

}  // namespace supnorm
