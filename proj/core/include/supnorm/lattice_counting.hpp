#pragma once

#include "supnorm/enumerator.hpp"
#include "supnorm/quaternion_orders.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace supnorm {

enum class CountStrategy { Auto, Search, Blocks };

struct CountOptions {
  int threads = 1;
  bool timing = false;  // wall_ms stays 0 unless set
  CountStrategy strategy = CountStrategy::Auto;
  long double h1_threshold = 4;  // max_sigma h_1 allowed for the e2/e1 sums
  bool reduce = true;            // enumerate in the reduced basis
};

struct BoundTerm {
  std::string name;
  long double value = 0;
};

struct CountReport {
  nlohmann::json query;
  std::uint64_t count = 0;
  std::uint64_t nodes = 0;
  std::vector<BoundTerm> bound_terms;   // bound = sum of these
  std::vector<BoundTerm> alternatives;  // both sides of a min(), for reference
  long double bound = 0;
  std::optional<long double> ratio;     // count / bound when bound > 0
  double wall_ms = 0;
};
nlohmann::json to_json(const CountReport& r);

// Thrown when the h_1 witness required by the e2/e1 sums is missing.
class WitnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BlockTables;

// Exact representation engine.  Forms whose Gram splits into orthogonal
// blocks are counted by convolving the value buckets of two halves; all
// others go through the Fincke-Pohst search.
class RepresentationEngine {
 public:
  explicit RepresentationEngine(const QuadraticForm& q, const CountOptions& opt = {});
  ~RepresentationEngine();
  RepresentationEngine(RepresentationEngine&&) noexcept;

  const QuadraticForm& form() const { return q_; }
  bool uses_blocks() const { return !block_index_[0].empty(); }

  // Sorted lexicographically (coordinate by coordinate, then (a, b)).
  std::vector<OVector> representations(const IntCoords& ell, EnumStats* stats = nullptr) const;
  std::uint64_t count(const IntCoords& ell, EnumStats* stats = nullptr) const;
  std::vector<std::uint64_t> counts(const std::vector<IntCoords>& ells, EnumStats* stats = nullptr) const;

  // Streams the representations of every target into one accumulator per
  // target.  Acc needs a default constructor and merge(const Acc&).  The
  // visiting order is fixed, independent of the thread count.
  template <class Acc, class Visit>
  std::vector<Acc> accumulate(const std::vector<IntCoords>& ells, Visit&& visit, EnumStats* stats = nullptr) const {
    return accumulate_impl<Acc, true>(ells, visit, stats);
  }

  // Histogram of exact values Q(x) over all x with Q^sigma(x) <= r_sigma
  // (a superset, within rounding; callers filter exactly).
  std::map<IntCoords, std::uint64_t> value_histogram(const std::vector<long double>& r, EnumStats* stats = nullptr) const;

 private:
  using Sink = std::function<void(const OVector&)>;
  bool admissible(const IntCoords& ell) const;
  std::vector<long double> radius(const IntCoords& ell) const;
  std::unique_ptr<BlockTables> build_blocks(const std::vector<IntCoords>& ells, EnumStats* stats) const;
  void block_visit(const BlockTables& t, const IntCoords& ell, const Sink& sink) const;
  // Exact representations found by the search, grouped by outer value (job).
  std::vector<std::vector<OVector>> search_target(const IntCoords& ell, int threads, EnumStats* stats) const;
  // Map = false hands the visitor vectors in the working basis.
  template <class Acc, bool Map, class Visit>
  std::vector<Acc> accumulate_impl(const std::vector<IntCoords>& ells, Visit& visit, EnumStats* stats) const;
  OVector to_source(const OVector& y) const;

  QuadraticForm q_;
  CountOptions opt_;
  QuadraticForm work_;  // q_ or its reduction
  OMatrix basis_;       // columns: working basis in source coordinates; empty for the identity
  EllipsoidEnumerator enum_;
  std::array<std::vector<int>, 2> block_index_;
  std::array<QuadraticForm, 2> block_form_;
  std::array<EllipsoidEnumerator, 2> block_enum_;
};

std::vector<OVector> enumerate_representations(const QuadraticForm& q, const IntCoords& ell, const CountOptions& opt = {});

// Bound: N(l)^{1/2} for ternary, N(l) for quaternary, N(l)^{n/2-1} otherwise, 1 for binary.
CountReport rep_count(const QuadraticForm& q, const IntCoords& ell, const CountOptions& opt = {});

enum class AveragedMode { E3, E2, E1 };
std::string to_string(AveragedMode m);
// e3: sum over l of r(l); e2: sum over (l1, l2) of r(l1 l2^2); e1: sum over l of r(l^2);
// each l with 0 <= l^sigma <= y^{1/d}.  y2 is used by e2 only.
CountReport averaged_sum(const QuadraticForm& q, AveragedMode mode, const Rational& y, const Rational& y2 = 1,
                         const CountOptions& opt = {});

// P(x, y) = a x^2 + b xy + c y^2 + d x + e y + f over O_F.
struct BinaryPolynomial {
  FieldContext ctx;
  IntCoords a{}, b{}, c{}, d{}, e{}, f{};
  IntCoords value(const IntCoords& x, const IntCoords& y) const;
  long double height() const;  // sum over sigma and coefficients of |alpha^sigma|
};
CountReport binary_inhomogeneous_count(const BinaryPolynomial& p, const IntCoords& ell, const CountOptions& opt = {});

using Vec3 = std::array<long double, 3>;
using Mat3 = std::array<Vec3, 3>;
struct ArchResult {
  long double lhs = 0;
  long double rhs = 0;
};
// Q(v) = v^t A v / 2 with Gram A.  Preconditions are checked to 1e-9 and the
// eigenvalues of A must be at least min_eigen.
ArchResult arch_geometry_a(const Mat3& A, const Vec3& x, const Vec3& y, long double eta, long double min_eigen = 1e-12L);
ArchResult arch_geometry_b(const Mat3& A, const std::array<Vec3, 3>& ys, const Vec3& x, long double ell, long double eta,
                           long double min_eigen = 1e-12L);
ArchResult arch_geometry_c(const Mat3& A, const Vec3& y, long double ell, long double min_eigen = 1e-12L);

enum class ConstraintMode { NearTorus, NearEquator, Unconstrained };
std::string to_string(ConstraintMode m);
ConstraintMode constraint_mode_from_string(const std::string& s);

struct ConstrainedCountQuery {
  NormFormSplit split;
  IntCoords ell{};
  std::vector<Vec3> directions;  // one per embedding, in ternary coordinates
  std::vector<long double> eta;  // one per embedding
  ConstraintMode mode = ConstraintMode::Unconstrained;
};
CountReport constrained_count(const ConstrainedCountQuery& q, const CountOptions& opt = {});
// Right-hand side terms for the given N(l) and N(eta) = prod eta_j; the two
// sides of each min go to alternatives.
std::vector<BoundTerm> constrained_bound_terms(ConstraintMode mode, long double Nl, long double Ne,
                                               std::vector<BoundTerm>* alternatives = nullptr);
// Counts for several eta vectors from one enumeration (same order as etas).
std::vector<std::uint64_t> constrained_counts(const ConstrainedCountQuery& q, const std::vector<std::vector<long double>>& etas,
                                              const CountOptions& opt = {});
// A direction normalized so that the embedded ternary form takes the value 1.
Vec3 unit_direction(const QuadraticForm& ternary, int sigma, const Vec3& v);
// Throws unless the split has shape (4, 3) and each direction has unit ternary value.
void validate_directions(const NormFormSplit& split, const std::vector<Vec3>& directions);

struct SplitValues {
  long double y0sq = 0;      // (y0^sigma)^2
  long double inner_sq = 0;  // <y~^sigma, x_sigma>^2
  long double ternary = 0;   // Q~^sigma(y~^sigma)
};
// Split coordinates of order vectors, per embedding.
class SplitEvaluator {
 public:
  SplitEvaluator(const NormFormSplit& split, const std::vector<Vec3>& directions);
  void evaluate(const OVector& x, std::vector<SplitValues>& out) const;

 private:
  FieldContext ctx_;
  std::array<std::array<std::array<long double, 4>, 4>, 2> change_{};
  std::vector<Mat3> gram_;
  std::vector<Vec3> dir_;
};

// Whether split values pass the per-embedding constraint of the mode, with the
// same relative slack as constrained_count.
bool constraint_admits(ConstraintMode mode, const std::vector<SplitValues>& v, const std::vector<long double>& eta,
                       const std::vector<long double>& ell);

// ---- template implementation ----

struct BlockTables {
  // bucket[value] = flat list of sub-vectors of the block
  std::array<std::map<IntCoords, std::vector<IntCoords>>, 2> bucket;
};

template <class Acc, bool Map, class Visit>
std::vector<Acc> RepresentationEngine::accumulate_impl(const std::vector<IntCoords>& ells, Visit& visit,
                                                       EnumStats* stats) const {
  auto emit = [&](Acc& acc, const OVector& y) {
    if constexpr (Map) {
      if (!basis_.empty()) {
        visit(acc, to_source(y));
        return;
      }
    }
    visit(acc, y);
  };
  std::vector<Acc> out(ells.size());
  if (ells.empty()) return out;
  if (uses_blocks()) {
    auto tables = build_blocks(ells, stats);
    struct Part {
      Acc acc{};
      std::uint64_t leaves = 0;
    };
    auto parts = parallel_map<Part>(ells.size(), opt_.threads, [&](std::size_t k) {
      Part p;
      if (admissible(ells[k]))
        block_visit(*tables, ells[k], [&](const OVector& x) {
          ++p.leaves;
          emit(p.acc, x);
        });
      return p;
    });
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (stats) stats->leaves += parts[k].leaves;
      out[k] = std::move(parts[k].acc);
    }
    return out;
  }
  auto run_target = [&](std::size_t k, int threads, EnumStats* st) {
    Acc total{};
    if (!admissible(ells[k])) return total;
    // Job-wise partials merged in job order keep floating sums reproducible.
    for (const auto& found : search_target(ells[k], threads, st)) {
      Acc part{};
      for (const auto& x : found) emit(part, x);
      total.merge(part);
    }
    return total;
  };
  if (ells.size() == 1) {
    out[0] = run_target(0, opt_.threads, stats);
    return out;
  }
  struct Part {
    Acc acc{};
    EnumStats st;
  };
  auto parts = parallel_map<Part>(ells.size(), opt_.threads, [&](std::size_t k) {
    Part p;
    p.acc = run_target(k, 1, &p.st);
    return p;
  });
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (stats) {
      stats->nodes += parts[k].st.nodes;
      stats->leaves += parts[k].st.leaves;
    }
    out[k] = std::move(parts[k].acc);
  }
  return out;
}

}  // namespace supnorm
