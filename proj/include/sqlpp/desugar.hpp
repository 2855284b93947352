#pragma once

#include "sqlpp/ast.hpp"

namespace sqlpp {

// Rewrites every syntactic-sugar form into core SQL++: comma and joins into
// correlates, FLATTEN into correlated ranges, SQL SELECT into SELECT ELEMENT,
// grouping-expression and aggregate sugar into group-variable form.
// Pure AST-to-AST; the result shares unchanged subtrees with the input.
ast::QueryPtr desugar(const ast::QueryPtr& q);

// True when the query contains no sugar node kinds and every grouping
// expression carries a variable.
bool is_core(const ast::Query& q);

}  // namespace sqlpp
