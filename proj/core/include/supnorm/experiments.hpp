#pragma once

#include "supnorm/amplifier_engine.hpp"
#include "supnorm/json_io.hpp"
#include "supnorm/lattice_counting.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace supnorm {

// ---- built-in corpus ----

struct CorpusEntry {
  std::string name;
  std::string kind;  // "order" or "form"
  std::string field;
  int rank = 0;
  bool split = false;  // has a y0^2 + ternary split
  std::string description;
};
std::vector<CorpusEntry> corpus();
const CorpusEntry& corpus_entry(const std::string& name);  // throws std::invalid_argument

// Orders: "lipschitz", "hurwitz", "maximal-p", "eichler-p-N".
QuaternionOrder builtin_order(const std::string& name);
bool is_builtin_order(const std::string& name);
// Any corpus name; orders give their norm form.
QuadraticForm builtin_form(const std::string& name);
NormFormSplit builtin_split(const std::string& name);
// Prime factors of N(disc*) for orders, of the level norm for forms.
std::vector<std::int64_t> builtin_exclusions(const std::string& name);

// ---- config ----

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key = value text; '#' starts a comment.  Later assignments win.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config from_file(const std::string& path);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void merge(const Config& other);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  std::string require(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  Rational get_rational(const std::string& key, const Rational& fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma separated
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// ---- lemma scans ----

// Target sampling: every element up to full_upto, then `samples` evenly spread
// elements with norm up to nmax (all ordered by norm inside the cone).
std::vector<IntCoords> sample_targets(const FieldContext& ctx, std::int64_t full_upto, std::int64_t nmax, int samples);

enum class LemmaKind { TernaryUniform, QuaternaryUniform, Averaged, NearTorus, NearEquator };
std::string to_string(LemmaKind k);
LemmaKind lemma_kind_from_string(const std::string& s);
std::vector<LemmaKind> all_lemma_kinds();

struct LemmaScanOptions {
  std::int64_t full_upto = 200;
  std::int64_t nmax = 10000;
  int samples = 100;
  std::int64_t averaged_radius = 1000;  // max N of the targets inside averaged sums
  std::vector<std::string> forms;       // empty: every applicable corpus entry
  CountOptions count;
};

struct LemmaRow {
  std::string form;
  std::string stratum;  // fixed lemma parameter (the eta value for constrained counts)
  std::string query;    // target or parameter description
  std::uint64_t count = 0;
  long double bound = 0;
  long double ratio = 0;
};

struct LemmaStratum {
  std::string name;
  std::size_t rows = 0;
  long double max_ratio = 0;
  long double median_ratio = 0;  // over rows with nonzero count
  bool guard_ok = true;          // max_ratio <= 10 * median_ratio
};

// The guard compares every ratio with the corpus median of its stratum, so
// the scan variable is the target while lemma parameters stay fixed.
struct LemmaScan {
  LemmaKind kind = LemmaKind::QuaternaryUniform;
  std::vector<LemmaRow> rows;
  std::vector<LemmaStratum> strata;
  long double max_ratio = 0;  // the recorded corpus constant
  bool guard_ok = true;
  std::vector<std::string> skipped;
};
LemmaScan lemma_scan(LemmaKind kind, const LemmaScanOptions& opt);
// Several kinds at once; the quaternary kinds share one enumeration per target.
std::vector<LemmaScan> lemma_scans(const std::vector<LemmaKind>& kinds, const LemmaScanOptions& opt);
// Dyadic thresholds 2^-7, ..., 1 used by the constrained scans.
const std::vector<Rational>& constrained_eta_grid();
nlohmann::json to_json(const LemmaScan& s, bool with_rows = false);

// ---- command runner ----

// Exit codes: 0 success, 1 invariant violation, 2 configuration error.
enum ExitCode { kExitOk = 0, kExitViolation = 1, kExitConfig = 2 };

std::vector<std::string> commands();
int run(const std::string& command, const Config& cfg, std::ostream& out, std::ostream& err);

}  // namespace supnorm
