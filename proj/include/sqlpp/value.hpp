#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlpp/error.hpp"

namespace sqlpp {

// A SQL++ value: missing, null, primitive scalar (string/number/boolean),
// enriched scalar (type constructor over primitives), tuple, array or bag.
// Values are immutable after construction and freely copyable/shareable.
//
// `missing` is representable because path navigation and no-match padding can
// produce it mid-evaluation; the tuple factory drops missing-valued
// attributes, and the literal parser refuses missing inside complex values.
class Value {
 public:
  enum class Kind { Missing, Null, Bool, Int, Float, String, Enriched, Tuple, Array, Bag };

  struct Attr;

  Value() : kind_(Kind::Missing) {}

  static Value missing() { return Value(); }
  static Value null();
  static Value boolean(bool b);
  static Value integer(int64_t i);
  static Value real(double d);
  static Value string(std::string s);
  // args must be primitives (Bool/Int/Float/String); type_name a nonempty identifier.
  static Value enriched(std::string type_name, std::vector<Value> args);
  // Throws EvalError(DuplicateAttribute) on a repeated name.
  // Attributes whose value is missing are dropped.
  static Value tuple(std::vector<Attr> attrs);
  static Value array(std::vector<Value> elems);
  static Value bag(std::vector<Value> elems);

  Kind kind() const { return kind_; }

  bool is_missing() const { return kind_ == Kind::Missing; }
  bool is_null() const { return kind_ == Kind::Null; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_float() const { return kind_ == Kind::Float; }
  bool is_number() const { return kind_ == Kind::Int || kind_ == Kind::Float; }
  bool is_string() const { return kind_ == Kind::String; }
  bool is_enriched() const { return kind_ == Kind::Enriched; }
  bool is_tuple() const { return kind_ == Kind::Tuple; }
  bool is_array() const { return kind_ == Kind::Array; }
  bool is_bag() const { return kind_ == Kind::Bag; }
  bool is_collection() const { return is_array() || is_bag(); }
  bool is_scalar() const {
    return kind_ == Kind::Bool || is_number() || is_string() || is_enriched();
  }
  bool is_complex() const { return is_tuple() || is_collection(); }

  bool as_bool() const { return bool_; }
  int64_t as_int() const { return int_; }
  double as_float() const { return float_; }
  // Mathematical value of an Int or Float; extended precision keeps
  // int64/double comparisons exact.
  long double number_value() const;
  const std::string& as_string() const { return str_; }
  const std::string& enriched_type() const { return str_; }
  // Array/Bag elements, or Enriched constructor args.
  const std::vector<Value>& elements() const { return elems_; }
  const std::vector<Attr>& attrs() const { return attrs_; }
  const Value* attr(std::string_view name) const;

 private:
  Kind kind_;
  bool bool_ = false;
  int64_t int_ = 0;
  double float_ = 0.0;
  std::string str_;
  std::vector<Value> elems_;
  std::vector<Attr> attrs_;
};

struct Value::Attr {
  std::string name;
  Value value;
};

// Deep value identity: same kind, numbers by mathematical value, tuples by
// attribute-name set (order-insensitive), bags by element bijection.
// Distinct from the configurable `=` of the evaluator.
bool structural_equal(const Value& a, const Value& b);

// Total order over all values, used for ORDER BY and for the canonical bag
// serialization order. Returns <0, 0, >0. compare_total(a,b)==0 agrees with
// structural_equal(a,b).
int compare_total(const Value& a, const Value& b);

// Canonical text form: the engine's sole value interchange format.
std::string serialize(const Value& v);
// Indented multi-line variant for interactive output.
std::string serialize_pretty(const Value& v);

struct NamedValue {
  std::string name;  // unique within a database
  Value value;
};

// Ordered variable-name -> value map used as the evaluation context.
// Structurally a tuple; names are unique.
class BindingTuple {
 public:
  BindingTuple() = default;

  // Appends; throws EvalError(DuplicateAttribute) if the name is taken.
  void bind(std::string name, Value v);
  const Value* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Left-precedence concatenation: all bindings of `a`, then bindings of `b`
  // whose names do not occur in `a`.
  static BindingTuple concat(const BindingTuple& a, const BindingTuple& b);

  // The binding tuple as a plain tuple value (missing-valued bindings dropped).
  Value reify() const;

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

}  // namespace sqlpp
