#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "supnorm/experiments.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

using namespace supnorm;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_text(const std::string& cmd, const std::string& cfg_text) {
  std::ostringstream out, err;
  int rc = run(cmd, Config::parse(cfg_text), out, err);
  return {rc, out.str(), err.str()};
}

}  // namespace

TEST_CASE("config text") {
  auto c = Config::parse("# header\n a = 3 \nname = \"x # y\"\n\nlist = 1, 2 ,3\na = 4  # later wins\n");
  CHECK(c.get_int("a", 0) == 4);
  CHECK(c.get("name") == "\"x");  // '#' starts a comment even inside quotes
  CHECK(c.get_list("list") == std::vector<std::string>{"1", "2", "3"});
  CHECK(Config::parse("s = \"hello\"").get("s") == "hello");
  CHECK(Config::parse("r = -3/8").get_rational("r", 0) == Rational(-3, 8));
  CHECK(Config::parse("").get_double("missing", 2.5) == 2.5);
  CHECK_THROWS_AS(Config::parse("novalue\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse(" = 3\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("n = abc").get_int("n", 0), ConfigError);
  CHECK_THROWS_AS(Config().require("k"), ConfigError);
  CHECK_THROWS_AS(Config::from_file("/nonexistent/supnorm.cfg"), ConfigError);
  Config m = Config::parse("a = 1\nb = 2");
  m.merge(Config::parse("b = 3"));
  CHECK(m.get("a") == "1");
  CHECK(m.get("b") == "3");
}

TEST_CASE("corpus listing") {
  auto r = run_text("corpus", "");
  CHECK(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j["name"] == corpus()[n].name);
    ++n;
  }
  CHECK(n == static_cast<int>(corpus().size()));
  CHECK(n == 9);
  CHECK_THROWS(corpus_entry("nonesuch"));
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    CHECK(builtin_form(e.name).rank() == e.rank);
    CHECK(builtin_form(e.name).context().tag() == e.field);
    if (e.split) CHECK(builtin_split(e.name).gram_identity);
  }
}

TEST_CASE("count command") {
  auto r = run_text("count", "builtin = lipschitz\nell = 3\n");
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["count"] == 32);
  CHECK(run_text("count", "builtin = hurwitz\nell = 5\n").code == kExitOk);
  CHECK(nlohmann::json::parse(run_text("count", "builtin = hurwitz\nell = 5\n").out)["count"] == 144);
  // configuration errors exit with 2
  CHECK(run_text("count", "ell = 3\n").code == kExitConfig);
  CHECK(run_text("count", "builtin = nonesuch\n").code == kExitConfig);
  CHECK(run_text("count", "builtin = lipschitz\nform = x.json\n").code == kExitConfig);
  CHECK(run_text("count", "builtin = lipschitz\nmode = sideways\n").code == kExitConfig);
  CHECK(run_text("count", "builtin = lipschitz\nell = abc\n").code == kExitConfig);
  CHECK(run_text("count", "form = /nonexistent.json\n").code == kExitConfig);
  CHECK(run_text("frobnicate", "").code == kExitConfig);
}

TEST_CASE("constrained and binary counts through the runner") {
  auto eq = run_text("count", "builtin = lipschitz\nmode = near-equator\nell = 5\neta = 1\n");
  CHECK(eq.code == kExitOk);
  CHECK(nlohmann::json::parse(eq.out)["count"] == 48);
  auto bin = run_text("count", "mode = binary\nfield = Q\na = 1\nc = 1\nd = 1\nell = 0\n");
  CHECK(bin.code == kExitOk);
  // x^2 + y^2 + x = 0 at (0, 0) and (-1, 0)
  CHECK(nlohmann::json::parse(bin.out)["count"] == 2);
}

TEST_CASE("exponents command") {
  auto r = run_text("exponents", "kappa = 3/20\n");
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"max\":\"17/20\"") != std::string::npos);
  CHECK(run_text("exponents", "s_volume = 0\n").code == kExitConfig);
}

TEST_CASE("amplify command") {
  auto r = run_text("amplify", "builtin = lipschitz\nL = 3\nm = 0\nl = 0\n");
  CHECK(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["S_count"] == nlohmann::json::array({80, 1200, 3184, 27368}));
  CHECK(run_text("amplify", "builtin = lipschitz\nm = 1\nl = 2\n").code == kExitConfig);
  CHECK(run_text("amplify", "builtin = qsqrt5-binary\nm = 0,0\nl = 0,0\n").code == kExitConfig);
}

TEST_CASE("target sampling") {
  auto ctx = FieldContext::rationals();
  auto t = sample_targets(ctx, 10, 100, 5);
  REQUIRE(t.size() == 15);
  for (int k = 0; k < 10; ++k) CHECK(t[k] == IntCoords{k + 1, 0});
  CHECK(t.back() == IntCoords{100, 0});
  CHECK(sample_targets(ctx, 10, 100, 0).size() == 10);
  CHECK(sample_targets(ctx, 10, 12, 50).size() == 12);
  auto q2 = FieldContext::quadratic(2);
  for (const auto& x : sample_targets(q2, 20, 200, 10)) {
    CHECK(q2.is_totally_positive(x));
    CHECK(in_cone(q2, x));
  }
}

TEST_CASE("lemma kinds and the threshold grid") {
  for (auto k : all_lemma_kinds()) CHECK(lemma_kind_from_string(to_string(k)) == k);
  CHECK_THROWS(lemma_kind_from_string("uniform"));
  const auto& g = constrained_eta_grid();
  REQUIRE(g.size() == 8);
  CHECK(g.front() == Rational(1, 128));
  CHECK(g.back() == 1);
  for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] == 2 * g[k - 1]);
}

TEST_CASE("a small lemma scan") {
  LemmaScanOptions opt;
  opt.full_upto = 30;
  opt.nmax = 200;
  opt.samples = 5;
  opt.forms = {"lipschitz"};
  auto scans = lemma_scans({LemmaKind::QuaternaryUniform, LemmaKind::NearTorus}, opt);
  REQUIRE(scans.size() == 2);
  CHECK(scans[0].kind == LemmaKind::QuaternaryUniform);
  CHECK(scans[0].strata.size() == 1);
  CHECK(scans[1].strata.size() == 8);
  for (const auto& s : scans) {
    long double mx = 0;
    for (const auto& row : s.rows) {
      CHECK(row.form == "lipschitz");
      CHECK(row.ratio == doctest::Approx(static_cast<double>(row.count / row.bound)));
      mx = std::max(mx, row.ratio);
    }
    CHECK(mx == s.max_ratio);
  }
  // the single-kind wrapper agrees with the combined scan
  auto single = lemma_scan(LemmaKind::NearTorus, opt);
  CHECK(to_json(single, true).dump() == to_json(scans[1], true).dump());
}

TEST_CASE("json round trips") {
  for (const char* name : {"ternary-2I3", "qsqrt2-2I3", "qsqrt5-binary"}) {
    QuadraticForm q = builtin_form(name);
    QuadraticForm back = form_from_json(form_to_json(q));
    CHECK(back.int_gram() == q.int_gram());
    CHECK(back.context().tag() == q.context().tag());
  }
  for (const char* name : {"hurwitz", "eichler-2-3", "lipschitz"}) {
    QuaternionOrder o = builtin_order(name);
    QuaternionOrder back = order_from_json(order_to_json(o));
    CHECK(back.norm_form.int_gram() == o.norm_form.int_gram());
    CHECK(back.reduced_disc_norm == o.reduced_disc_norm);
  }
  auto ctx = FieldContext::quadratic(5);
  auto x = parse_element(ctx, "3-2*w");
  CHECK(element_from_json(ctx, element_to_json(x)) == x);
  CHECK(element_from_json(ctx, nlohmann::json::array({3, -2})) == x);
  CHECK_THROWS_AS(form_from_json(nlohmann::json{{"field", "Q"}, {"rank", 2}, {"gram", {{2, 1}}}}), JsonIoError);
  CHECK_THROWS_AS(parse_element(ctx, "3+*w"), JsonIoError);
  CHECK(parse_element(ctx, "w") == parse_element(ctx, "1*w"));
}
