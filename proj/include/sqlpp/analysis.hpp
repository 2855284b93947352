#pragma once

#include <set>
#include <string>
#include <vector>

#include "sqlpp/ast.hpp"

namespace sqlpp {

// Variables a FROM item binds, in definition order.
std::vector<std::string> defined_vars(const ast::FromItem& f);

// Free variable names of an expression, accounting for SFW subquery scoping
// (a subquery's FROM/GROUP BY bindings shadow outer names inside it).
std::set<std::string> free_vars(const ast::Expr& e);
std::set<std::string> free_vars(const ast::Query& q);

// Free variables across every expression of a FROM item, with correlation
// visibility ignored: the caller decides which defined names count as free.
std::set<std::string> free_vars_from(const ast::FromItem& f);

// Every variable name that appears anywhere in the query (definitions and
// references); used to pick fresh names.
std::set<std::string> all_names(const ast::Query& q);

}  // namespace sqlpp
