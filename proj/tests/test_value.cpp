#include "doctest.h"
#include "sqlpp/parser.hpp"
#include "sqlpp/value.hpp"
#include "test_support.hpp"

using namespace sqlpp;
using testsupport::ValueGen;

namespace {

BindingTuple bt(std::vector<std::pair<std::string, Value>> entries) {
  BindingTuple b;
  for (auto& [n, v] : entries) b.bind(n, v);
  return b;
}

std::string names_of(const BindingTuple& b) {
  std::string out;
  for (const auto& [n, v] : b.entries()) {
    out += n;
    out += '=';
    out += serialize(v);
    out += ';';
  }
  return out;
}

}  // namespace

TEST_CASE("binding concat keeps left bindings on conflict") {
  BindingTuple x1 = bt({{"x", Value::integer(1)}});
  BindingTuple y2 = bt({{"y", Value::integer(2)}});
  CHECK(names_of(BindingTuple::concat(x1, y2)) == "x=1;y=2;");

  BindingTuple x9y2 = bt({{"x", Value::integer(9)}, {"y", Value::integer(2)}});
  CHECK(names_of(BindingTuple::concat(x1, x9y2)) == "x=1;y=2;");

  BindingTuple empty;
  CHECK(names_of(BindingTuple::concat(empty, x1)) == "x=1;");
  CHECK(names_of(BindingTuple::concat(x1, empty)) == "x=1;");
}

TEST_CASE("binding concat is associative") {
  ValueGen gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto random_binding = [&gen]() {
      BindingTuple b;
      int n = gen.pick(3);
      for (int i = 0; i < n; ++i) {
        std::string name = gen.name();
        if (!b.contains(name)) b.bind(name, gen.value(1));
      }
      return b;
    };
    BindingTuple a = random_binding();
    BindingTuple b = random_binding();
    BindingTuple c = random_binding();
    BindingTuple left = BindingTuple::concat(BindingTuple::concat(a, b), c);
    BindingTuple right = BindingTuple::concat(a, BindingTuple::concat(b, c));
    CHECK(names_of(left) == names_of(right));
  }
}

TEST_CASE("structural equality basics") {
  Value a1 = Value::tuple({{"a", Value::integer(1)}});
  Value a1_again = Value::tuple({{"a", Value::integer(1)}});
  CHECK(structural_equal(a1, a1_again));
  CHECK_FALSE(structural_equal(Value::null(), Value::missing()));
  CHECK(structural_equal(Value::integer(1), Value::real(1.0)));
  CHECK_FALSE(structural_equal(Value::integer(1), Value::real(1.5)));
  // Attribute order does not matter.
  Value ab = Value::tuple({{"a", Value::integer(1)}, {"b", Value::integer(2)}});
  Value ba = Value::tuple({{"b", Value::integer(2)}, {"a", Value::integer(1)}});
  CHECK(structural_equal(ab, ba));
}

TEST_CASE("bag equality matches the bijection oracle") {
  Value lhs = Value::bag({Value::integer(1), Value::integer(2), Value::integer(2)});
  Value rhs = Value::bag({Value::integer(2), Value::integer(1), Value::integer(2)});
  REQUIRE(testsupport::bag_bijection_exists(lhs.elements(), rhs.elements()));
  CHECK(structural_equal(lhs, rhs));

  ValueGen gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Value> xs, ys;
    int n = gen.pick(6);
    for (int i = 0; i < n; ++i) xs.push_back(gen.value(1));
    if (gen.pick(2) == 0) {
      ys = xs;
      std::shuffle(ys.begin(), ys.end(), gen.rng());
    } else {
      for (int i = 0; i < n; ++i) ys.push_back(gen.value(1));
    }
    bool expected = testsupport::bag_bijection_exists(xs, ys);
    CHECK(structural_equal(Value::bag(xs), Value::bag(ys)) == expected);
  }
}

TEST_CASE("structural equality is an equivalence relation") {
  ValueGen gen(13);
  std::vector<Value> pool;
  for (int i = 0; i < 40; ++i) pool.push_back(gen.value(1));
  for (int trial = 0; trial < 500; ++trial) {
    const Value& a = pool[static_cast<size_t>(gen.pick(40))];
    const Value& b = pool[static_cast<size_t>(gen.pick(40))];
    const Value& c = pool[static_cast<size_t>(gen.pick(40))];
    CHECK(structural_equal(a, a));
    CHECK(structural_equal(a, b) == structural_equal(b, a));
    if (structural_equal(a, b) && structural_equal(b, c)) CHECK(structural_equal(a, c));
  }
}

TEST_CASE("compare_total zero agrees with structural equality") {
  ValueGen gen(17);
  std::vector<Value> pool;
  for (int i = 0; i < 40; ++i) pool.push_back(gen.value(2));
  for (const auto& a : pool) {
    for (const auto& b : pool) {
      CHECK((compare_total(a, b) == 0) == structural_equal(a, b));
      CHECK(compare_total(a, b) == -compare_total(b, a));
    }
  }
}

TEST_CASE("serialization follows the canonical text format") {
  CHECK(serialize(Value::tuple({{"co", Value::real(2.2)}})) == "{co: 2.2}");
  CHECK(serialize(Value::bag({})) == "{{}}");
  CHECK(serialize(Value::enriched("timestamp", {Value::string("2014-03-12T20:00:00")})) ==
        "timestamp('2014-03-12T20:00:00')");
  CHECK(serialize(Value::integer(3)) == "3");
  CHECK(serialize(Value::string("it's")) == "'it\\'s'");
  CHECK(serialize(Value::array({Value::real(0.5), Value::integer(2)})) == "[0.5, 2]");
  // Bags serialize in the canonical total order.
  CHECK(serialize(Value::bag({Value::integer(3), Value::integer(1), Value::null()})) ==
        "{{null, 1, 3}}");
}

TEST_CASE("tuple construction drops missing and rejects duplicates") {
  Value t = Value::tuple({{"a", Value::integer(1)}, {"b", Value::missing()}});
  CHECK(serialize(t) == "{a: 1}");
  CHECK_THROWS_AS(Value::tuple({{"a", Value::integer(1)}, {"a", Value::integer(2)}}), EvalError);
}

TEST_CASE("serialize/parse round trip preserves structure") {
  ValueGen gen(23);
  for (int trial = 0; trial < 400; ++trial) {
    Value v = gen.value(3);
    Value reparsed = parse_value_literal(serialize(v));
    CHECK(structural_equal(v, reparsed));
  }
}

TEST_CASE("total order ranks kinds as documented") {
  CHECK(compare_total(Value::null(), Value::integer(3)) < 0);
  CHECK(compare_total(Value::missing(), Value::null()) < 0);
  CHECK(compare_total(Value::integer(1), Value::real(1.0)) == 0);
  CHECK(compare_total(Value::array({Value::integer(1), Value::integer(2)}),
                      Value::array({Value::integer(1), Value::integer(3)})) < 0);
  CHECK(compare_total(Value::boolean(false), Value::boolean(true)) < 0);
  CHECK(compare_total(Value::boolean(true), Value::integer(0)) < 0);
  CHECK(compare_total(Value::string("a"), Value::enriched("t", {})) < 0);
  CHECK(compare_total(Value::enriched("t", {}), Value::array({})) < 0);
  CHECK(compare_total(Value::array({}), Value::tuple({})) < 0);
  CHECK(compare_total(Value::tuple({}), Value::bag({})) < 0);
}
