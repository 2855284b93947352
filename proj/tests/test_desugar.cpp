#include <random>

#include "doctest.h"
#include "sqlpp/desugar.hpp"
#include "sqlpp/engine.hpp"
#include "sqlpp/parser.hpp"
#include "sqlpp/printer.hpp"

using namespace sqlpp;

namespace {

std::string core_of(const char* src) { return print_query(*desugar(parse_query(src))); }

// Evaluates both texts over the same environment and compares results.
void check_equivalent(const std::string& env_text, const std::string& sugar,
                      const std::string& core) {
  Session session;
  session.load_environment_text(env_text);
  CAPTURE(env_text);
  CAPTURE(sugar);
  CAPTURE(core);
  Value a = session.run(sugar);
  Value b = session.run(core);
  CHECK(structural_equal(a, b));
}

}  // namespace

TEST_CASE("LEFT JOIN rewrites to LEFT CORRELATE over a filtered subquery") {
  CHECK(core_of("FROM l AS x LEFT JOIN r AS y ON c SELECT ELEMENT x") ==
        "SELECT ELEMENT x FROM l AS x LEFT CORRELATE (SELECT ELEMENT y FROM r AS y WHERE c) AS y");
  CHECK(core_of("FROM l AS x INNER JOIN r AS y ON c SELECT ELEMENT x") ==
        "SELECT ELEMENT x FROM l AS x INNER CORRELATE (SELECT ELEMENT y FROM r AS y WHERE c) AS "
        "y");
  // RIGHT JOIN swaps sides into a LEFT JOIN.
  CHECK(core_of("FROM l AS x RIGHT JOIN r AS y ON c SELECT ELEMENT y") ==
        "SELECT ELEMENT y FROM r AS y LEFT CORRELATE (SELECT ELEMENT x FROM l AS x WHERE c) AS x");
  // FULL JOIN is the ON-correlate core form.
  CHECK(core_of("FROM l AS x FULL JOIN r AS y ON x = y SELECT ELEMENT x") ==
        "SELECT ELEMENT x FROM l AS x FULL CORRELATE r AS y ON x = y");
  CHECK_THROWS_AS(desugar(parse_query("FROM l AS x LEFT JOIN r AS y AT p ON c SELECT ELEMENT x")),
                  DesugarError);
}

TEST_CASE("FLATTEN rewrites to correlated collection ranges") {
  CHECK(core_of("FROM INNER FLATTEN(l AS x, x.p AS y) SELECT ELEMENT y") ==
        "SELECT ELEMENT y FROM l AS x INNER CORRELATE x.p AS y");
  CHECK(core_of("FROM OUTER FLATTEN(l AS x, x.p[1].q AS y) SELECT ELEMENT y") ==
        "SELECT ELEMENT y FROM l AS x LEFT CORRELATE x.p[1].q AS y");
  CHECK_THROWS_WITH_AS(desugar(parse_query("FROM INNER FLATTEN(l AS x, z.p AS y) SELECT ELEMENT y")),
                       doctest::Contains("path rooted at"), DesugarError);
}

TEST_CASE("comma desugars to INNER CORRELATE when independent") {
  CHECK(core_of("FROM l AS x, r AS y SELECT ELEMENT x") ==
        "SELECT ELEMENT x FROM l AS x INNER CORRELATE r AS y");
  CHECK_THROWS_WITH_AS(desugar(parse_query("FROM l AS x, x.p AS y SELECT ELEMENT y")),
                       doctest::Contains("left-side variable"), DesugarError);
}

TEST_CASE("FULL CORRELATE sides must be independent") {
  CHECK_THROWS_AS(desugar(parse_query("FROM l AS x FULL CORRELATE x.p AS y ON true SELECT ELEMENT x")),
                  DesugarError);
}

TEST_CASE("SQL SELECT rewrites to a tuple-building SELECT ELEMENT") {
  CHECK(core_of("SELECT r.gas AS g, r.num AS n FROM t AS r") ==
        "SELECT ELEMENT {g: r.gas, n: r.num} FROM t AS r");
  // A path item without alias takes the attribute name.
  CHECK(core_of("SELECT r.gas FROM t AS r") == "SELECT ELEMENT {gas: r.gas} FROM t AS r");
  CHECK_THROWS_WITH_AS(desugar(parse_query("SELECT 1 + 2 FROM t AS r")),
                       doctest::Contains("alias"), DesugarError);
  CHECK_THROWS_AS(desugar(parse_query("SELECT r.a, x.a FROM t AS r, u AS x")), DesugarError);
}

TEST_CASE("grouping sugar introduces variables and per-group aggregates") {
  CHECK(core_of("FROM readings AS r GROUP BY r.gas "
                "SELECT ELEMENT {gas: r.gas, c: count(*), a: avg(r.num)}") ==
        "SELECT ELEMENT {gas: g1, c: count(group), a: avg((SELECT ELEMENT p1.r.num FROM group AS "
        "p1))} FROM readings AS r GROUP BY r.gas AS g1");
  // Already-core queries pass through unchanged.
  const char* core_src = "SELECT ELEMENT g FROM t AS r GROUP BY r.gas AS g";
  CHECK(core_of(core_src) == print_query(*parse_query(core_src)));
  CHECK_THROWS_WITH_AS(
      desugar(parse_query("FROM t AS r GROUP BY r.gas SELECT ELEMENT r.num")),
      doctest::Contains("not a grouping expression"), DesugarError);
}

TEST_CASE("grouping expressions match in HAVING and ORDER BY") {
  CHECK(core_of("FROM t AS r GROUP BY r.gas HAVING r.gas = 'co' ORDER BY r.gas "
                "SELECT r.gas AS gas") ==
        "SELECT ELEMENT {gas: g1} FROM t AS r GROUP BY r.gas AS g1 HAVING g1 = 'co' ORDER BY g1");
}

TEST_CASE("star calls and HAVING need a grouped query") {
  CHECK_THROWS_WITH_AS(desugar(parse_query("SELECT ELEMENT count(*) FROM t AS r")),
                       doctest::Contains("grouped"), DesugarError);
  CHECK_THROWS_WITH_AS(desugar(parse_query("FROM t AS r HAVING true SELECT ELEMENT r")),
                       doctest::Contains("HAVING"), DesugarError);
}

TEST_CASE("desugared output contains no sugar forms and is idempotent") {
  const std::vector<const char*> corpus = {
      "FROM l AS x LEFT JOIN r AS y ON x.k = y.k SELECT x.k AS k",
      "FROM l AS x, r AS y, s AS z SELECT ELEMENT [x, y, z]",
      "FROM INNER FLATTEN(l AS x, x.p AS y) SELECT ELEMENT y",
      "FROM OUTER FLATTEN(l AS x, x.p AS y) SELECT ELEMENT y",
      "FROM t AS r GROUP BY r.gas SELECT r.gas, count(*) AS c, sum(r.num) AS s",
      "SELECT r.a, r.b AS bee FROM t AS r WHERE r.a < 3",
      "FROM l AS x RIGHT JOIN r AS y ON x.k = y.k SELECT ELEMENT {x: x, y: y}",
      "SELECT ELEMENT (SELECT u.z AS z FROM x.items AS u) FROM t AS x",
  };
  for (const char* src : corpus) {
    CAPTURE(src);
    auto once = desugar(parse_query(src));
    CHECK(is_core(*once));
    auto twice = desugar(once);
    CHECK(print_query(*twice) == print_query(*once));
  }
}

TEST_CASE("sugar and hand-written core rewrites evaluate identically") {
  std::mt19937 rng(99);
  auto num = [&rng](int n) { return static_cast<int>(rng() % static_cast<uint32_t>(n)); };
  auto small_db = [&](bool with_arrays) {
    std::string l = "l :: {{";
    int nl = num(5);
    for (int i = 0; i < nl; ++i) {
      if (i > 0) l += ", ";
      l += "{k: " + std::to_string(num(3)) + ", a: " + std::to_string(num(5));
      if (with_arrays) {
        l += ", p: [";
        int np = num(4);
        for (int j = 0; j < np; ++j) {
          if (j > 0) l += ", ";
          l += std::to_string(num(5));
        }
        l += "]";
      }
      l += "}";
    }
    l += "}}\nr :: {{";
    int nr = num(5);
    for (int i = 0; i < nr; ++i) {
      if (i > 0) l += ", ";
      l += "{k: " + std::to_string(num(3)) + ", b: " + std::to_string(num(5)) + "}";
    }
    l += "}}\n";
    return l;
  };

  for (int trial = 0; trial < 60; ++trial) {
    std::string db = small_db(true);
    check_equivalent(db,
                     "FROM l AS x LEFT JOIN r AS y ON x.k = y.k SELECT ELEMENT {x: x, y: y}",
                     "FROM l AS x LEFT CORRELATE (FROM r AS y WHERE x.k = y.k SELECT ELEMENT y) "
                     "AS y SELECT ELEMENT {x: x, y: y}");
    check_equivalent(db,
                     "FROM l AS x INNER JOIN r AS y ON x.k = y.k SELECT ELEMENT {x: x, y: y}",
                     "FROM l AS x INNER CORRELATE (FROM r AS y WHERE x.k = y.k SELECT ELEMENT y) "
                     "AS y SELECT ELEMENT {x: x, y: y}");
    check_equivalent(db, "FROM l AS x, r AS y SELECT ELEMENT {x: x, y: y}",
                     "FROM l AS x INNER CORRELATE r AS y SELECT ELEMENT {x: x, y: y}");
    check_equivalent(db, "FROM INNER FLATTEN(l AS x, x.p AS y) SELECT ELEMENT {a: x.a, y: y}",
                     "FROM l AS x INNER CORRELATE x.p AS y SELECT ELEMENT {a: x.a, y: y}");
    check_equivalent(db, "FROM OUTER FLATTEN(l AS x, x.p AS y) SELECT ELEMENT {a: x.a, y: y}",
                     "FROM l AS x LEFT CORRELATE x.p AS y SELECT ELEMENT {a: x.a, y: y}");
    check_equivalent(db, "SELECT x.k AS k, x.a AS a FROM l AS x",
                     "SELECT ELEMENT {k: x.k, a: x.a} FROM l AS x");
  }
}
