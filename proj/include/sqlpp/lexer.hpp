#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sqlpp/error.hpp"

namespace sqlpp {

enum class Kw {
  None,
  Select, Element, Attribute, From, Where, Group, By, Having, Order,
  Asc, Desc, Limit, Offset, Union, Intersect, Except, All,
  As, At, Inner, Left, Right, Full, Outer, Correlate, Join, On, Flatten,
  And, Or, Not, True, False, Null, Missing,
};

enum class Sym {
  None,
  LParen, RParen, LBracket, RBracket, LBrace, RBrace, BagOpen, BagClose,
  Comma, Colon, DoubleColon, Dot, Semicolon, AtSign, Star, Plus, Minus, Slash,
  Eq, Neq, Lt, Le, Gt, Ge,
};

struct Token {
  enum class Type { Ident, Keyword, Int, Float, String, Symbol, End };

  Type type = Type::End;
  Kw kw = Kw::None;
  Sym sym = Sym::None;
  std::string text;  // identifier spelling, keyword spelling as written, or
                     // unescaped string contents
  int64_t int_value = 0;
  double float_value = 0.0;
  SourcePos pos;

  bool is_kw(Kw k) const { return type == Type::Keyword && kw == k; }
  bool is_sym(Sym s) const { return type == Type::Symbol && sym == s; }
  bool is_end() const { return type == Type::End; }
};

// Keywords are case-insensitive; identifiers case-sensitive; `{{`/`}}` lex as
// bag delimiters with longest match; `--` starts a line comment.
std::vector<Token> tokenize(std::string_view src);

// Maps a lowercased spelling to its keyword, or Kw::None.
Kw keyword_from(std::string_view lowered);

}  // namespace sqlpp
