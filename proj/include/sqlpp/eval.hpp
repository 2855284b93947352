#pragma once

#include <vector>

#include "sqlpp/ast.hpp"
#include "sqlpp/config.hpp"
#include "sqlpp/value.hpp"

namespace sqlpp {

// Binding tuples flowing between clauses. Order carries meaning only after
// ORDER BY (kind == Array).
struct BindingCollection {
  enum class Kind { Bag, Array };
  Kind kind = Kind::Bag;
  std::vector<BindingTuple> tuples;
};

// Evaluates a core (desugared) query within (gamma_b, gamma_c).
Value eval_query(const ast::Query& q, const BindingTuple& gamma_b, const ConfigEnv& gamma_c);
Value eval_expr(const ast::Expr& e, const BindingTuple& gamma_b, const ConfigEnv& gamma_c);

// Path evaluation functions.
Value nav_tuple(const Value& t, const std::string& attr, const ConfigEnv& cfg, SourcePos pos = {});
Value nav_array(const Value& arr, const Value& index, const ConfigEnv& cfg, SourcePos pos = {});

// The configurable equality evaluation function and the conjunction
// connective that folds element-wise results of deep equality.
Value eval_eq(const Value& x, const Value& y, const ConfigEnv& cfg, SourcePos pos = {});
Value and_connective(const Value& p, const Value& q, const ConfigEnv& cfg, SourcePos pos = {});
Value or_connective(const Value& p, const Value& q, const ConfigEnv& cfg, SourcePos pos = {});
Value not_connective(const Value& v, SourcePos pos = {});

// Built-in collection functions: count, sum, avg, min, max.
Value eval_builtin(const std::string& name, const std::vector<Value>& args, SourcePos pos = {});

}  // namespace sqlpp
