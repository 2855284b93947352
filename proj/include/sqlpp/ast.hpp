#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqlpp/value.hpp"

namespace sqlpp::ast {

struct Expr;
struct Query;
struct FromItem;
using ExprPtr = std::shared_ptr<Expr>;
using QueryPtr = std::shared_ptr<Query>;
using FromItemPtr = std::shared_ptr<FromItem>;

// ---- expressions -----------------------------------------------------------

struct Literal {
  Value value;
};

// Variables and database named values resolve uniformly at evaluation time.
struct VarRef {
  std::string name;
};

struct PathStep {
  ExprPtr base;
  std::string attr;
};

struct IndexStep {
  ExprPtr base;
  ExprPtr index;
};

struct FuncCall {
  std::string name;
  std::vector<ExprPtr> args;
  bool star = false;  // f(*)
};

struct Unary {
  enum class Op { Neg, Not };
  Op op;
  ExprPtr operand;
};

struct Binary {
  enum class Op { Or, And, Eq, Neq, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };
  Op op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct TupleCtor {
  // Attribute names are literals here; computed names exist only in
  // SELECT ATTRIBUTE.
  std::vector<std::pair<std::string, ExprPtr>> attrs;
};

struct ArrayCtor {
  std::vector<ExprPtr> elems;
};

struct BagCtor {
  std::vector<ExprPtr> elems;
};

// A parenthesized SFW query (or annotated query) in expression position.
struct Subquery {
  QueryPtr query;
};

struct Expr {
  SourcePos pos;
  std::variant<Literal, VarRef, PathStep, IndexStep, FuncCall, Unary, Binary,
               TupleCtor, ArrayCtor, BagCtor, Subquery>
      node;
};

// ---- FROM items ------------------------------------------------------------

struct RangeCollection {  // FROM e AS x (AT y)?
  ExprPtr expr;
  std::string elem_var;
  std::optional<std::string> pos_var;
};

struct RangeTuple {  // FROM t AS {a : v}
  ExprPtr expr;
  std::string name_var;
  std::string value_var;
};

struct Correlate {  // core: l INNER|LEFT (CORRELATE) r
  enum class Kind { Inner, Left };
  Kind kind;
  FromItemPtr left;
  FromItemPtr right;
};

struct FullCorrelate {  // core: l FULL CORRELATE r ON c
  FromItemPtr left;
  FromItemPtr right;
  ExprPtr cond;
};

struct CartesianComma {  // sugar: l , r
  FromItemPtr left;
  FromItemPtr right;
};

struct Join {  // sugar: l INNER|LEFT|RIGHT|FULL JOIN r ON c
  enum class Kind { Inner, Left, Right, Full };
  Kind kind;
  FromItemPtr left;
  FromItemPtr right;
  ExprPtr cond;
};

struct Flatten {  // sugar: INNER|OUTER FLATTEN(e1 AS x, e2 AS y)
  enum class Kind { Inner, Outer };
  Kind kind;
  ExprPtr expr1;
  std::string var1;
  ExprPtr expr2;
  std::string var2;
};

struct FromItem {
  SourcePos pos;
  std::variant<RangeCollection, RangeTuple, Correlate, FullCorrelate,
               CartesianComma, Join, Flatten>
      node;
};

// ---- clauses ---------------------------------------------------------------

struct SelectElement {
  ExprPtr expr;
};

struct SelectAttribute {
  ExprPtr name_expr;
  ExprPtr value_expr;
};

struct SelectSugarItem {
  ExprPtr expr;
  std::optional<std::string> alias;
};

struct SelectSugar {
  std::vector<SelectSugarItem> items;
};

struct SelectClause {
  SourcePos pos;
  std::variant<SelectElement, SelectAttribute, SelectSugar> node;
};

struct GroupingItem {
  ExprPtr expr;
  std::optional<std::string> var;
};

struct OrderItem {
  ExprPtr expr;
  bool descending = false;
};

struct SetOpClause {
  enum class Op { Union, Intersect, Except };
  Op op;
  bool all = false;
  QueryPtr rhs;  // parsed but rejected at evaluation
};

struct SfwQuery {
  SelectClause select;
  FromItemPtr from;
  ExprPtr where;                                       // optional
  std::optional<std::vector<GroupingItem>> group_by;   // optional
  ExprPtr having;                                      // optional
  std::optional<SetOpClause> set_op;                   // optional
  std::vector<OrderItem> order_by;                     // empty = absent
  ExprPtr limit;                                       // optional
  ExprPtr offset;                                      // optional
};

// One `group.param: option` setting; multi-param annotations and nested
// annotated queries normalize to a flat outermost-to-innermost list.
struct ConfigSetting {
  std::string group;
  std::string param;
  std::string option;
  SourcePos pos;
};

struct Annotated {
  std::vector<ConfigSetting> settings;
  QueryPtr inner;
};

struct ExprQuery {
  ExprPtr expr;
};

struct Query {
  SourcePos pos;
  std::variant<SfwQuery, ExprQuery, Annotated> node;
};

template <typename T, typename Node>
const T* get_if(const Node& n) {
  return std::get_if<T>(&n.node);
}

ExprPtr make_expr(SourcePos pos, decltype(Expr::node) node);
QueryPtr make_query(SourcePos pos, decltype(Query::node) node);
FromItemPtr make_from(SourcePos pos, decltype(FromItem::node) node);

}  // namespace sqlpp::ast
