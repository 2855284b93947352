#pragma once

#include <string_view>
#include <vector>

#include "sqlpp/ast.hpp"
#include "sqlpp/value.hpp"

namespace sqlpp {

// Parses one query (SFW, expression or annotated). Trailing `;` permitted.
ast::QueryPtr parse_query(std::string_view src);

// Parses one value literal per the value grammar: no expressions, `missing`
// rejected inside complex values.
Value parse_value_literal(std::string_view src);

// Parses a database environment file: newline-separated `name :: value`
// entries. Names must be unique.
std::vector<NamedValue> parse_environment(std::string_view src);

// Splits REPL/batch input into `;`-terminated query texts, respecting string
// literals and comments. A final unterminated chunk is returned as-is.
std::vector<std::string> split_statements(std::string_view src);

}  // namespace sqlpp
