#include "doctest.h"
#include "sqlpp/config.hpp"
#include "sqlpp/parser.hpp"

using namespace sqlpp;

namespace {

ast::ConfigSetting setting(const char* group, const char* param, const char* option) {
  return {group, param, option, {}};
}

bool same_settings(const ConfigEnv& a, const ConfigEnv& b) {
  return a.settings() == b.settings();
}

}  // namespace

TEST_CASE("annotations shadow the prior setting and leave the rest") {
  ConfigEnv base = Profile::load("sql").config();
  REQUIRE(base.lookup("tuple_nav.absent") == Opt::Error);
  ConfigEnv overridden = base.with(setting("tuple_nav", "absent", "missing"));
  CHECK(overridden.lookup("tuple_nav.absent") == Opt::Missing);
  CHECK(overridden.lookup("tuple_nav.type_mismatch") == Opt::Error);
  for (const auto& param : registry_params()) {
    if (param == "tuple_nav.absent") continue;
    CHECK(overridden.lookup(param) == base.lookup(param));
  }

  // Idempotent.
  CHECK(same_settings(overridden, overridden.with(setting("tuple_nav", "absent", "missing"))));

  CHECK_THROWS_AS(base.with(setting("eq", "null_eq_null", "banana")), ConfigError);
  CHECK_THROWS_AS(base.with(setting("eq", "no_such_param", "true")), ConfigError);
}

TEST_CASE("override is left-biased and order-sensitive") {
  ConfigEnv base = default_config();
  ConfigEnv ab = base.with(setting("from", "no_match", "null"))
                     .with(setting("from", "no_match", "missing"));
  CHECK(ab.lookup("from.no_match") == Opt::Missing);
  ConfigEnv ba = base.with(setting("from", "no_match", "missing"))
                     .with(setting("from", "no_match", "null"));
  CHECK(ba.lookup("from.no_match") == Opt::Null);
}

TEST_CASE("nav.failure macro expands to the four navigation parameters") {
  for (const char* option : {"error", "null", "missing"}) {
    auto rows = expand_macro("nav", "failure", option);
    REQUIRE(rows.size() == 4);
    ConfigEnv env = default_config().with_all({setting("nav", "failure", option)});
    Opt expected = *option_from(option);
    CHECK(env.lookup("tuple_nav.absent") == expected);
    CHECK(env.lookup("tuple_nav.type_mismatch") == expected);
    CHECK(env.lookup("array_nav.absent") == expected);
    CHECK(env.lookup("array_nav.type_mismatch") == expected);
  }
  CHECK_THROWS_AS(expand_macro("nav", "failure", "banana"), ConfigError);
  CHECK_THROWS_AS(expand_macro("nav", "bogus", "null"), ConfigError);
  CHECK_THROWS_AS(expand_macro("mystery", "x", "y"), ConfigError);
}

TEST_CASE("unknown.value macro matches its expansion table") {
  ConfigEnv logic = default_config().with_all({setting("unknown", "value", "logic")});
  CHECK(logic.lookup("eq.null_eq_null") == Opt::Null);
  CHECK(logic.lookup("eq.null_eq_missing") == Opt::Missing);
  CHECK(logic.lookup("eq.null_eq_value") == Opt::Null);
  CHECK(logic.lookup("eq.missing_eq_missing") == Opt::Missing);
  CHECK(logic.lookup("eq.missing_eq_value") == Opt::Missing);
  CHECK(logic.lookup("eq.null_and_true") == Opt::Null);
  CHECK(logic.lookup("eq.null_and_null") == Opt::Null);
  CHECK(logic.lookup("eq.null_and_missing") == Opt::Missing);
  CHECK(logic.lookup("eq.missing_and_true") == Opt::Missing);
  CHECK(logic.lookup("eq.missing_and_missing") == Opt::Missing);

  // Sentinel sets the five equality parameters and leaves conjunction alone.
  ConfigEnv weird = default_config().with_all({setting("eq", "null_and_true", "false")});
  ConfigEnv sentinel = weird.with_all({setting("unknown", "value", "sentinel")});
  CHECK(sentinel.lookup("eq.null_eq_null") == Opt::True);
  CHECK(sentinel.lookup("eq.null_eq_missing") == Opt::False);
  CHECK(sentinel.lookup("eq.null_eq_value") == Opt::False);
  CHECK(sentinel.lookup("eq.missing_eq_missing") == Opt::True);
  CHECK(sentinel.lookup("eq.missing_eq_value") == Opt::False);
  CHECK(sentinel.lookup("eq.null_and_true") == Opt::False);  // untouched by the macro
}

TEST_CASE("macro application equals setting each row directly") {
  struct MacroCase {
    const char* group;
    const char* param;
    const char* option;
  };
  for (const auto& m : {MacroCase{"nav", "failure", "error"}, MacroCase{"nav", "failure", "null"},
                        MacroCase{"nav", "failure", "missing"},
                        MacroCase{"unknown", "value", "logic"},
                        MacroCase{"unknown", "value", "sentinel"}}) {
    ConfigEnv via_macro = default_config().with_all({setting(m.group, m.param, m.option)});
    ConfigEnv direct = default_config();
    for (const auto& row : expand_macro(m.group, m.param, m.option)) direct = direct.with(row);
    CHECK(same_settings(via_macro, direct));
  }
}

TEST_CASE("profiles carry the documented settings") {
  Profile sql = Profile::load("sql");
  CHECK(sql.config().lookup("tuple_nav.absent") == Opt::Error);
  CHECK(sql.config().lookup("eq.null_eq_value") == Opt::Null);
  CHECK(sql.config().lookup("eq.type_mismatch") == Opt::False);
  CHECK(sql.config().lookup("from.no_match") == Opt::Null);
  CHECK(sql.config().lookup("from.bag_order") == Opt::Counter);
  CHECK(sql.gate_for("select.element").has_value());
  CHECK(sql.gate_for("group_by.group_var").has_value());
  CHECK_FALSE(sql.gate_for("group_by.support").has_value());

  Profile aql = Profile::load("aql");
  CHECK(aql.config().lookup("tuple_nav.absent") == Opt::Null);
  CHECK(aql.config().lookup("eq.null_eq_value") == Opt::Null);
  CHECK_FALSE(aql.gate_for("from.inner_correlate").has_value());
  CHECK_FALSE(aql.gate_for("select.element").has_value());

  Profile n1ql = Profile::load("n1ql");
  CHECK(n1ql.config().lookup("tuple_nav.absent") == Opt::Missing);
  CHECK(n1ql.config().lookup("tuple_nav.type_mismatch") == Opt::Missing);
  CHECK(n1ql.config().lookup("from.no_match") == Opt::Missing);

  Profile mongo = Profile::load("mongo");
  CHECK(mongo.config().lookup("tuple_nav.absent") == Opt::Missing);
  CHECK(mongo.config().lookup("eq.null_eq_null") == Opt::True);
  CHECK(mongo.config().lookup("eq.null_eq_missing") == Opt::False);
  CHECK(mongo.config().lookup("eq.missing_eq_missing") == Opt::True);
  CHECK(mongo.config().lookup("eq.missing_eq_value") == Opt::False);
  CHECK(mongo.gate_for("from.subquery").has_value());

  CHECK(Profile::load("cql").gate_for("group_by.support").has_value());
  CHECK(Profile::load("default").gates().empty());
  CHECK_THROWS_AS(Profile::load("oracle"), ConfigError);
}

TEST_CASE("unmodeled dialect cells raise a distinct diagnostic when consulted") {
  Profile n1ql = Profile::load("n1ql");
  CHECK_THROWS_WITH_AS(n1ql.config().lookup("eq.null_eq_null"),
                       doctest::Contains("unmodeled"), EvalError);
  // An explicit annotation overrides the unmodeled cell.
  ConfigEnv fixed = n1ql.config().with(setting("eq", "null_eq_null", "true"));
  CHECK(fixed.lookup("eq.null_eq_null") == Opt::True);
}

TEST_CASE("feature gates fire from the AST alone") {
  Profile sql = Profile::load("sql");
  auto gated = [&](const char* query, const Profile& profile) -> std::string {
    try {
      check_feature_gates(*parse_query(query), profile, {"readings", "t"});
      return "";
    } catch (const EvalError& e) {
      return e.what();
    }
  };

  CHECK(gated("SELECT ELEMENT 1 FROM [1] AS x", sql) ==
        "feature 'select.element' is not supported by profile 'sql'");
  CHECK(gated("SELECT x.a AS a FROM t AS x", sql) == "");
  CHECK(gated("FROM t AS x GROUP BY x.a AS g SELECT g AS a, count(*) AS c", sql) == "");
  CHECK(gated("FROM t AS x GROUP BY x.a AS g SELECT ELEMENT group", sql) ==
        "feature 'select.element' is not supported by profile 'sql'");
  CHECK(gated("FROM t AS x GROUP BY x.a AS g ORDER BY count(group) SELECT g AS a", sql) ==
        "feature 'group_by.group_var' is not supported by profile 'sql'");
  CHECK(gated("FROM t AS {a:v} SELECT a AS a", sql) ==
        "feature 'from.tuple' is not supported by profile 'sql'");
  CHECK(gated("SELECT x.a AS a FROM t AS x WHERE x.b[1] = 2", sql) ==
        "feature 'array_nav.support' is not supported by profile 'sql'");

  Profile cql = Profile::load("cql");
  CHECK(gated("FROM t AS x GROUP BY x.a AS g SELECT g AS a", cql) ==
        "feature 'group_by.support' is not supported by profile 'cql'");
  CHECK(gated("SELECT x.a AS a FROM (SELECT y.a AS a FROM t AS y) AS x", cql) ==
        "feature 'from.subquery' is not supported by profile 'cql'");

  Profile aql = Profile::load("aql");
  CHECK(gated("FROM t AS x INNER CORRELATE x.a AS y SELECT ELEMENT y", aql) == "");
  CHECK(gated("FROM t AS x LEFT CORRELATE x.a AS y SELECT ELEMENT y", aql) ==
        "feature 'from.left_correlate' is not supported by profile 'aql'");

  Profile mongo = Profile::load("mongo");
  CHECK(gated("SELECT x.a AS a FROM t AS x WHERE x.b[1] = 2", mongo) ==
        "feature 'array_nav.support' is unmodeled in profile 'mongo' (partial or inconsistent "
        "support)");

  // Named values outside FROM are restricted in every dialect profile.
  CHECK(gated("SELECT x.a AS a FROM t AS x WHERE x.k = readings", sql) ==
        "feature 'named_value.restrict_to_from' is not supported by profile 'sql'");
  CHECK(gated("SELECT x.a AS a FROM readings AS x", sql) == "");

  // The permissive default gates nothing.
  Profile def = Profile::load("default");
  CHECK(gated("SELECT ELEMENT group FROM t AS {a:v} GROUP BY v AS g", def) == "");
}

TEST_CASE("stored-shape rules validate databases per dialect") {
  Profile sql = Profile::load("sql");
  auto shapes = [&](const char* env_text, const Profile& profile) -> std::string {
    try {
      check_stored_shapes(parse_environment(env_text), profile);
      return "";
    } catch (const EvalError& e) {
      return e.what();
    }
  };

  CHECK(shapes("t :: {{ {a: 1}, {a: 2} }}", sql) == "");
  CHECK(shapes("t :: {a: 1}", sql) ==
        "feature 'stored_named.tuple' is not supported by profile 'sql' (named value 't')");
  CHECK(shapes("t :: {{1, 2}}", sql) ==
        "feature 'stored_bag.element_scalar' is not supported by profile 'sql' (named value 't')");
  CHECK(shapes("t :: {{ {a: 1}, {b: 2} }}", sql) ==
        "feature 'stored_bag.heterogeneous' is not supported by profile 'sql' (named value 't')");
  CHECK(shapes("t :: {{ {a: [1]} }}", sql) ==
        "feature 'stored_tuple.attribute_array' is not supported by profile 'sql' (named value "
        "'t')");

  Profile mongo = Profile::load("mongo");
  CHECK(shapes("t :: {{ {a: [1, 'x']}, {b: {c: null}} }}", mongo) == "");
  CHECK(shapes("t :: {{ {a: {{1}}} }}", mongo) ==
        "feature 'stored_tuple.attribute_bag' is not supported by profile 'mongo' (named value "
        "'t')");

  Profile aql = Profile::load("aql");
  CHECK(shapes("t :: {{ {a: {{1, 'x'}}} }}", aql) == "");  // nested bags are unrestricted
  CHECK(shapes("t :: {{1}}", aql) ==
        "feature 'stored_bag.element_scalar' is not supported by profile 'aql' (named value 't')");

  CHECK(shapes("t :: {a: 1}", Profile::load("default")) == "");
}

TEST_CASE("profiles load from text files") {
  const char* path = "/tmp/sqlpp_test_profile.conf";
  {
    FILE* f = fopen(path, "w");
    REQUIRE(f != nullptr);
    fputs("# custom profile\n", f);
    fputs("tuple_nav.absent: null\n", f);
    fputs("from.no_match: missing\n", f);
    fputs("gate: select.attribute\n", f);
    fputs("gate_partial: from.inner_join\n", f);
    fclose(f);
  }
  Profile p = Profile::load_file(path);
  CHECK(p.config().lookup("tuple_nav.absent") == Opt::Null);
  CHECK(p.config().lookup("from.no_match") == Opt::Missing);
  CHECK(p.config().lookup("eq.complex") == Opt::Yes);  // untouched default
  CHECK(p.gate_for("select.attribute") == GateStatus::Unsupported);
  CHECK(p.gate_for("from.inner_join") == GateStatus::Partial);
  CHECK_THROWS_AS(Profile::load_file("/tmp/definitely_missing_profile.conf"), ConfigError);
}
