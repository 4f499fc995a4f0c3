#pragma once

#include "supnorm/parallel.hpp"
#include "supnorm/quadratic_forms.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace supnorm {

struct EnumStats {
  std::uint64_t nodes = 0;   // coordinate values assigned during the search
  std::uint64_t leaves = 0;  // complete candidate vectors handed to the caller
};

// Fincke-Pohst search over O_F^n for the region Q^sigma(x + c^sigma) <= r_sigma
// (all sigma), using the LDL^t decomposition of each embedded Gram.  Bounds
// are widened slightly, so callers must verify leaves exactly.
//
// In exact mode the innermost coordinate is solved from Q^sigma = r_sigma
// instead of being scanned, so only candidates near the surface are emitted.
class EllipsoidEnumerator {
 public:
  EllipsoidEnumerator() = default;
  // shift[i][sigma] = c_i^sigma; empty means no shift.
  explicit EllipsoidEnumerator(const QuadraticForm& q, std::vector<std::array<long double, 2>> shift = {});

  int rank() const { return n_; }

  // Candidate values of the outermost coordinate; each one is a job.
  std::vector<IntCoords> outer_values(const std::vector<long double>& r, bool exact) const;
  // Emits every leaf whose outermost coordinate is `outer`; returns the node count.
  std::uint64_t search(const std::vector<long double>& r, bool exact, const IntCoords& outer,
                       const std::function<void(const OVector&)>& leaf) const;

  // One accumulator per outer value, in job order.
  template <class Acc, class Leaf>
  std::vector<Acc> map_jobs(const std::vector<long double>& r, bool exact, int threads, Leaf&& leaf,
                            EnumStats* stats = nullptr) const {
    auto outs = outer_values(r, exact);
    struct Job {
      Acc acc{};
      std::uint64_t nodes = 0, leaves = 0;
    };
    auto jobs = parallel_map<Job>(outs.size(), threads, [&](std::size_t k) {
      Job job;
      job.nodes = 1 + search(r, exact, outs[k], [&](const OVector& x) {
        ++job.leaves;
        leaf(job.acc, x);
      });
      return job;
    });
    std::vector<Acc> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) {
      if (stats) {
        stats->nodes += j.nodes;
        stats->leaves += j.leaves;
      }
      out.push_back(std::move(j.acc));
    }
    return out;
  }

 private:
  void candidates(int i, const std::vector<long double>& center, const std::vector<long double>& budget, bool solve,
                  std::vector<IntCoords>& out) const;

  int n_ = 0;
  int d_ = 1;
  std::array<long double, 2> omega_{};
  std::vector<std::vector<long double>> diag_;                // [sigma][i]
  std::vector<std::vector<std::vector<long double>>> upper_;  // [sigma][i][j], j > i
  std::vector<std::array<long double, 2>> shift_;
};

}  // namespace supnorm
