#pragma once

#include <string>

#include "sqlpp/ast.hpp"

namespace sqlpp {

// Canonical single-line query text. Reparsing the output yields a
// structurally identical AST; also used for syntactic expression matching
// during grouping desugar and for --emit-core.
std::string print_query(const ast::Query& q);
std::string print_expr(const ast::Expr& e);
std::string print_from_item(const ast::FromItem& f);

}  // namespace sqlpp
