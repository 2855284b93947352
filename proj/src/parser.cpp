#include "sqlpp/parser.hpp"

#include <cassert>
#include <cctype>

#include "sqlpp/lexer.hpp"

namespace sqlpp {

namespace ast {

ExprPtr make_expr(SourcePos pos, decltype(Expr::node) node) {
  auto e = std::make_shared<Expr>();
  e->pos = pos;
  e->node = std::move(node);
  return e;
}

QueryPtr make_query(SourcePos pos, decltype(Query::node) node) {
  auto q = std::make_shared<Query>();
  q->pos = pos;
  q->node = std::move(node);
  return q;
}

FromItemPtr make_from(SourcePos pos, decltype(FromItem::node) node) {
  auto f = std::make_shared<FromItem>();
  f->pos = pos;
  f->node = std::move(node);
  return f;
}

}  // namespace ast

namespace {

using namespace ast;

// Token cursor with the brace fix-ups the `{{`/`}}` longest-match rule needs:
// `}}}` lexes as BagClose+RBrace, but `{{{a:1}}}` requires the tuple to close
// first, so a BagClose can be split into two RBraces and two adjacent RBraces
// can be joined into a BagClose.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& cur() const { return tokens_[i_]; }
  const Token& peek(size_t ahead = 1) const {
    size_t j = i_ + ahead;
    return j < tokens_.size() ? tokens_[j] : tokens_.back();
  }
  void advance() {
    if (i_ + 1 < tokens_.size()) ++i_;
  }

  bool accept_sym(Sym s) {
    if (cur().is_sym(s)) {
      advance();
      return true;
    }
    return false;
  }

  bool accept_kw(Kw k) {
    if (cur().is_kw(k)) {
      advance();
      return true;
    }
    return false;
  }

  void expect_sym(Sym s, const char* what) {
    if (!accept_sym(s)) fail(std::string("expected ") + what);
  }

  void expect_kw(Kw k, const char* what) {
    if (!accept_kw(k)) fail(std::string("expected ") + what);
  }

  void expect_rbrace() {
    if (accept_sym(Sym::RBrace)) return;
    if (cur().is_sym(Sym::BagClose)) {
      // Split `}}` into `}` + `}`.
      Token rest = cur();
      rest.sym = Sym::RBrace;
      rest.pos.col += 1;
      tokens_[i_] = rest;
      return;
    }
    fail("expected '}'");
  }

  void expect_bag_close() {
    if (accept_sym(Sym::BagClose)) return;
    if (cur().is_sym(Sym::RBrace) && peek().pos.line == cur().pos.line &&
        peek().pos.col == cur().pos.col + 1) {
      if (peek().is_sym(Sym::RBrace)) {
        advance();
        advance();
        return;
      }
      if (peek().is_sym(Sym::BagClose)) {
        // `}` + `}}` covers this bag's close plus one brace of the next one.
        advance();
        Token rest = cur();
        rest.sym = Sym::RBrace;
        rest.pos.col += 1;
        tokens_[i_] = rest;
        return;
      }
    }
    fail("expected '}}'");
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message + ", got " + describe(cur()), cur().pos);
  }

  [[noreturn]] void fail_code(std::string code, const std::string& message) const {
    throw ParseError(std::move(code), message, cur().pos);
  }

  static std::string describe(const Token& t) {
    switch (t.type) {
      case Token::Type::End: return "end of input";
      case Token::Type::String: return "string literal";
      case Token::Type::Int:
      case Token::Type::Float: return "number '" + t.text + "'";
      case Token::Type::Ident: return "identifier '" + t.text + "'";
      case Token::Type::Keyword: return "keyword '" + t.text + "'";
      case Token::Type::Symbol: return "'" + symbol_text(t.sym) + "'";
    }
    return "token";
  }

  static std::string symbol_text(Sym s) {
    switch (s) {
      case Sym::LParen: return "(";
      case Sym::RParen: return ")";
      case Sym::LBracket: return "[";
      case Sym::RBracket: return "]";
      case Sym::LBrace: return "{";
      case Sym::RBrace: return "}";
      case Sym::BagOpen: return "{{";
      case Sym::BagClose: return "}}";
      case Sym::Comma: return ",";
      case Sym::Colon: return ":";
      case Sym::DoubleColon: return "::";
      case Sym::Dot: return ".";
      case Sym::Semicolon: return ";";
      case Sym::AtSign: return "@";
      case Sym::Star: return "*";
      case Sym::Plus: return "+";
      case Sym::Minus: return "-";
      case Sym::Slash: return "/";
      case Sym::Eq: return "=";
      case Sym::Neq: return "<>";
      case Sym::Lt: return "<";
      case Sym::Le: return "<=";
      case Sym::Gt: return ">";
      case Sym::Ge: return ">=";
      case Sym::None: break;
    }
    return "?";
  }

 private:
  std::vector<Token> tokens_;
  size_t i_ = 0;
};

// ---- value literals --------------------------------------------------------

class ValueParser {
 public:
  explicit ValueParser(Cursor& c) : c_(c) {}

  Value parse(bool top_level) {
    const Token& t = c_.cur();
    switch (t.type) {
      case Token::Type::Keyword:
        if (t.kw == Kw::Null) { c_.advance(); return Value::null(); }
        if (t.kw == Kw::Missing) {
          if (!top_level) c_.fail("missing not allowed inside complex values");
          c_.advance();
          return Value::missing();
        }
        if (t.kw == Kw::True) { c_.advance(); return Value::boolean(true); }
        if (t.kw == Kw::False) { c_.advance(); return Value::boolean(false); }
        c_.fail("expected value");
      case Token::Type::Int: {
        int64_t v = t.int_value;
        c_.advance();
        return Value::integer(v);
      }
      case Token::Type::Float: {
        double v = t.float_value;
        c_.advance();
        return Value::real(v);
      }
      case Token::Type::String: {
        std::string s = t.text;
        c_.advance();
        return Value::string(std::move(s));
      }
      case Token::Type::Ident:
        return enriched();
      case Token::Type::Symbol:
        switch (t.sym) {
          case Sym::Minus: {
            c_.advance();
            Value n = parse(false);
            if (n.is_int()) return Value::integer(-n.as_int());
            if (n.is_float()) return Value::real(-n.as_float());
            c_.fail("'-' applies to numbers only");
          }
          case Sym::LBrace: return tuple();
          case Sym::LBracket: return array();
          case Sym::BagOpen: return bag();
          default: break;
        }
        c_.fail("expected value");
      case Token::Type::End:
        c_.fail("expected value");
    }
    c_.fail("expected value");
  }

 private:
  Value enriched() {
    std::string name = c_.cur().text;
    SourcePos pos = c_.cur().pos;
    c_.advance();
    if (!c_.accept_sym(Sym::LParen)) {
      throw ParseError("expected '(' after enriched type name '" + name + "'", pos);
    }
    std::vector<Value> args;
    if (!c_.cur().is_sym(Sym::RParen)) {
      do {
        Value arg = parse(false);
        if (!arg.is_scalar() || arg.is_enriched()) {
          throw ParseError("enriched arguments must be primitives", pos);
        }
        args.push_back(std::move(arg));
      } while (c_.accept_sym(Sym::Comma));
    }
    c_.expect_sym(Sym::RParen, "')'");
    return Value::enriched(std::move(name), std::move(args));
  }

  Value tuple() {
    c_.advance();  // {
    std::vector<Value::Attr> attrs;
    if (!c_.cur().is_sym(Sym::RBrace) && !c_.cur().is_sym(Sym::BagClose)) {
      do {
        std::string name = attr_name();
        c_.expect_sym(Sym::Colon, "':'");
        Value v = parse(false);
        for (const auto& prev : attrs) {
          if (prev.name == name) {
            c_.fail_code("DuplicateAttribute", "duplicate tuple attribute '" + name + "'");
          }
        }
        attrs.push_back({std::move(name), std::move(v)});
      } while (c_.accept_sym(Sym::Comma));
    }
    c_.expect_rbrace();
    return Value::tuple(std::move(attrs));
  }

  std::string attr_name() {
    const Token& t = c_.cur();
    if (t.type == Token::Type::Ident || t.type == Token::Type::Keyword ||
        t.type == Token::Type::String) {
      std::string name = t.text;
      c_.advance();
      return name;
    }
    c_.fail("expected attribute name");
  }

  Value array() {
    c_.advance();  // [
    std::vector<Value> elems;
    if (!c_.cur().is_sym(Sym::RBracket)) {
      do {
        elems.push_back(parse(false));
      } while (c_.accept_sym(Sym::Comma));
    }
    c_.expect_sym(Sym::RBracket, "']'");
    return Value::array(std::move(elems));
  }

  Value bag() {
    c_.advance();  // {{
    std::vector<Value> elems;
    if (!c_.cur().is_sym(Sym::BagClose) && !c_.cur().is_sym(Sym::RBrace)) {
      do {
        elems.push_back(parse(false));
      } while (c_.accept_sym(Sym::Comma));
    }
    c_.expect_bag_close();
    return Value::bag(std::move(elems));
  }

  Cursor& c_;
};

// ---- queries ---------------------------------------------------------------

class QueryParser {
 public:
  explicit QueryParser(Cursor& c) : c_(c) {}

  QueryPtr parse_top() {
    QueryPtr q = query();
    c_.accept_sym(Sym::Semicolon);
    if (!c_.cur().is_end()) c_.fail("expected end of query");
    return q;
  }

  QueryPtr query() {
    SourcePos pos = c_.cur().pos;
    if (c_.cur().is_sym(Sym::AtSign)) return annotated();
    if (c_.cur().is_kw(Kw::Select) || c_.cur().is_kw(Kw::From)) {
      return make_query(pos, sfw());
    }
    ExprPtr e = expr();
    return make_query(pos, ExprQuery{std::move(e)});
  }

  QueryPtr annotated() {
    SourcePos pos = c_.cur().pos;
    std::vector<ConfigSetting> settings;
    while (c_.cur().is_sym(Sym::AtSign)) annotation_into(settings);
    QueryPtr inner;
    if (c_.accept_sym(Sym::LParen)) {
      inner = query();
      c_.expect_sym(Sym::RParen, "')'");
    } else {
      // Parentheses may be omitted when annotations precede a whole query,
      // as in a batch file prelude.
      inner = query();
    }
    // Normalize directly nested annotated queries into one flat list.
    if (auto* nested = ast::get_if<Annotated>(*inner)) {
      for (const auto& s : nested->settings) settings.push_back(s);
      inner = nested->inner;
    }
    return make_query(pos, Annotated{std::move(settings), std::move(inner)});
  }

  void annotation_into(std::vector<ConfigSetting>& out) {
    SourcePos pos = c_.cur().pos;
    c_.advance();  // @
    std::string group = option_word("annotation group");
    if (!c_.cur().is_sym(Sym::LBrace)) {
      // Bare macro annotation such as `@sql`.
      out.push_back({group, "", "", pos});
      return;
    }
    c_.advance();  // {
    do {
      SourcePos ppos = c_.cur().pos;
      std::string param = option_word("parameter name");
      c_.expect_sym(Sym::Colon, "':'");
      std::string option = option_word("option");
      out.push_back({group, std::move(param), std::move(option), ppos});
    } while (c_.accept_sym(Sym::Comma));
    c_.expect_rbrace();
  }

  std::string option_word(const char* what) {
    const Token& t = c_.cur();
    if (t.type == Token::Type::Ident || t.type == Token::Type::Keyword) {
      std::string text = t.text;
      if (t.type == Token::Type::Keyword) {
        for (char& ch : text) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      }
      c_.advance();
      return text;
    }
    c_.fail(std::string("expected ") + what);
  }

  // SFW query with SELECT written first or last.
  decltype(Query::node) sfw() {
    std::optional<SelectClause> select;
    if (c_.cur().is_kw(Kw::Select)) select = select_clause();

    c_.expect_kw(Kw::From, "FROM clause");
    SfwQuery q;
    q.from = from_item();

    if (c_.accept_kw(Kw::Where)) q.where = expr();

    if (c_.cur().is_kw(Kw::Group)) {
      c_.advance();
      c_.expect_kw(Kw::By, "BY");
      std::vector<GroupingItem> items;
      do {
        GroupingItem item;
        item.expr = expr();
        if (c_.accept_kw(Kw::As)) item.var = variable_name();
        items.push_back(std::move(item));
      } while (c_.accept_sym(Sym::Comma));
      q.group_by = std::move(items);
    }

    if (c_.accept_kw(Kw::Having)) q.having = expr();

    if (c_.cur().is_kw(Kw::Union) || c_.cur().is_kw(Kw::Intersect) ||
        c_.cur().is_kw(Kw::Except)) {
      SetOpClause setop;
      setop.op = c_.cur().is_kw(Kw::Union)       ? SetOpClause::Op::Union
                 : c_.cur().is_kw(Kw::Intersect) ? SetOpClause::Op::Intersect
                                                 : SetOpClause::Op::Except;
      c_.advance();
      setop.all = c_.accept_kw(Kw::All);
      SourcePos pos = c_.cur().pos;
      setop.rhs = make_query(pos, sfw());
      q.set_op = std::move(setop);
    }

    if (c_.cur().is_kw(Kw::Order)) {
      c_.advance();
      c_.expect_kw(Kw::By, "BY");
      do {
        OrderItem item;
        item.expr = expr();
        if (c_.accept_kw(Kw::Desc)) {
          item.descending = true;
        } else {
          c_.accept_kw(Kw::Asc);
        }
        q.order_by.push_back(std::move(item));
      } while (c_.accept_sym(Sym::Comma));
    }

    if (c_.accept_kw(Kw::Limit)) q.limit = expr();
    if (c_.accept_kw(Kw::Offset)) q.offset = expr();

    if (!select.has_value()) {
      if (!c_.cur().is_kw(Kw::Select)) c_.fail("expected SELECT clause");
      select = select_clause();
    }
    q.select = std::move(*select);
    return q;
  }

  SelectClause select_clause() {
    SelectClause clause;
    clause.pos = c_.cur().pos;
    c_.advance();  // SELECT
    if (c_.accept_kw(Kw::Element)) {
      clause.node = SelectElement{expr()};
      return clause;
    }
    if (c_.accept_kw(Kw::Attribute)) {
      ExprPtr name = expr();
      c_.expect_sym(Sym::Colon, "':'");
      ExprPtr value = expr();
      clause.node = SelectAttribute{std::move(name), std::move(value)};
      return clause;
    }
    SelectSugar sugar;
    do {
      SelectSugarItem item;
      item.expr = expr();
      if (c_.accept_kw(Kw::As)) item.alias = attr_name_word();
      sugar.items.push_back(std::move(item));
    } while (c_.accept_sym(Sym::Comma));
    clause.node = std::move(sugar);
    return clause;
  }

  // ---- FROM ----------------------------------------------------------------

  FromItemPtr from_item() {
    // Comma binds loosest; JOIN/CORRELATE chains are left-associative.
    FromItemPtr item = correlate_chain();
    while (c_.cur().is_sym(Sym::Comma)) {
      SourcePos pos = c_.cur().pos;
      c_.advance();
      FromItemPtr rhs = correlate_chain();
      item = make_from(pos, CartesianComma{std::move(item), std::move(rhs)});
    }
    return item;
  }

  FromItemPtr correlate_chain() {
    FromItemPtr item = from_primary();
    for (;;) {
      SourcePos pos = c_.cur().pos;
      if (c_.accept_kw(Kw::Inner)) {
        if (c_.accept_kw(Kw::Join)) {
          item = join_tail(Join::Kind::Inner, std::move(item), pos);
        } else {
          c_.accept_kw(Kw::Correlate);
          FromItemPtr rhs = from_primary();
          item = make_from(pos, Correlate{Correlate::Kind::Inner, std::move(item), std::move(rhs)});
        }
        continue;
      }
      if (c_.accept_kw(Kw::Left)) {
        bool outer = c_.accept_kw(Kw::Outer);
        (void)outer;
        if (c_.accept_kw(Kw::Join)) {
          item = join_tail(Join::Kind::Left, std::move(item), pos);
        } else {
          c_.accept_kw(Kw::Correlate);
          FromItemPtr rhs = from_primary();
          item = make_from(pos, Correlate{Correlate::Kind::Left, std::move(item), std::move(rhs)});
        }
        continue;
      }
      if (c_.accept_kw(Kw::Right)) {
        c_.accept_kw(Kw::Outer);
        c_.expect_kw(Kw::Join, "JOIN");
        item = join_tail(Join::Kind::Right, std::move(item), pos);
        continue;
      }
      if (c_.accept_kw(Kw::Full)) {
        bool outer = c_.accept_kw(Kw::Outer);
        (void)outer;
        if (c_.accept_kw(Kw::Join)) {
          item = join_tail(Join::Kind::Full, std::move(item), pos);
          continue;
        }
        c_.accept_kw(Kw::Correlate);
        FromItemPtr rhs = from_primary();
        c_.expect_kw(Kw::On, "ON");
        ExprPtr cond = expr();
        item = make_from(pos, FullCorrelate{std::move(item), std::move(rhs), std::move(cond)});
        continue;
      }
      return item;
    }
  }

  FromItemPtr join_tail(Join::Kind kind, FromItemPtr left, SourcePos pos) {
    FromItemPtr right = from_primary();
    c_.expect_kw(Kw::On, "ON");
    ExprPtr cond = expr();
    return make_from(pos, Join{kind, std::move(left), std::move(right), std::move(cond)});
  }

  FromItemPtr from_primary() {
    SourcePos pos = c_.cur().pos;
    if (c_.cur().is_kw(Kw::Inner) || c_.cur().is_kw(Kw::Outer)) {
      // INNER/OUTER FLATTEN(...)
      Flatten::Kind kind = c_.cur().is_kw(Kw::Inner) ? Flatten::Kind::Inner : Flatten::Kind::Outer;
      if (c_.peek().is_kw(Kw::Flatten)) {
        c_.advance();
        c_.advance();
        c_.expect_sym(Sym::LParen, "'('");
        ExprPtr e1 = expr();
        c_.expect_kw(Kw::As, "AS");
        std::string v1 = variable_name();
        c_.expect_sym(Sym::Comma, "','");
        ExprPtr e2 = expr();
        c_.expect_kw(Kw::As, "AS");
        std::string v2 = variable_name();
        c_.expect_sym(Sym::RParen, "')'");
        return make_from(pos, Flatten{kind, std::move(e1), std::move(v1), std::move(e2), std::move(v2)});
      }
    }
    ExprPtr e = expr();
    return range_tail(pos, std::move(e));
  }

  ExprPtr subquery_expr(SourcePos pos, QueryPtr q) {
    if (auto* eq = ast::get_if<ExprQuery>(*q)) return eq->expr;
    return make_expr(pos, Subquery{std::move(q)});
  }

  FromItemPtr range_tail(SourcePos pos, ExprPtr e) {
    c_.expect_kw(Kw::As, "AS");
    if (c_.accept_sym(Sym::LBrace)) {
      std::string name_var = variable_name();
      c_.expect_sym(Sym::Colon, "':'");
      std::string value_var = variable_name();
      c_.expect_rbrace();
      return make_from(pos, RangeTuple{std::move(e), std::move(name_var), std::move(value_var)});
    }
    RangeCollection rc;
    rc.expr = std::move(e);
    rc.elem_var = variable_name();
    if (c_.accept_kw(Kw::At)) rc.pos_var = variable_name();
    return make_from(pos, std::move(rc));
  }

  std::string variable_name() {
    const Token& t = c_.cur();
    if (t.type == Token::Type::Ident) {
      std::string name = t.text;
      c_.advance();
      return name;
    }
    if (t.type == Token::Type::Keyword) {
      c_.fail("reserved keyword '" + t.text + "' cannot be used as a variable name");
    }
    c_.fail("expected variable name");
  }

  // ---- expressions ---------------------------------------------------------

  ExprPtr expr() { return or_expr(); }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (c_.cur().is_kw(Kw::Or)) {
      SourcePos pos = c_.cur().pos;
      c_.advance();
      lhs = make_expr(pos, Binary{Binary::Op::Or, std::move(lhs), and_expr()});
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = not_expr();
    while (c_.cur().is_kw(Kw::And)) {
      SourcePos pos = c_.cur().pos;
      c_.advance();
      lhs = make_expr(pos, Binary{Binary::Op::And, std::move(lhs), not_expr()});
    }
    return lhs;
  }

  ExprPtr not_expr() {
    if (c_.cur().is_kw(Kw::Not)) {
      SourcePos pos = c_.cur().pos;
      c_.advance();
      return make_expr(pos, Unary{Unary::Op::Not, not_expr()});
    }
    return comparison();
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    for (;;) {
      Binary::Op op;
      if (c_.cur().is_sym(Sym::Eq)) op = Binary::Op::Eq;
      else if (c_.cur().is_sym(Sym::Neq)) op = Binary::Op::Neq;
      else if (c_.cur().is_sym(Sym::Lt)) op = Binary::Op::Lt;
      else if (c_.cur().is_sym(Sym::Le)) op = Binary::Op::Le;
      else if (c_.cur().is_sym(Sym::Gt)) op = Binary::Op::Gt;
      else if (c_.cur().is_sym(Sym::Ge)) op = Binary::Op::Ge;
      else return lhs;
      SourcePos pos = c_.cur().pos;
      c_.advance();
      lhs = make_expr(pos, Binary{op, std::move(lhs), additive()});
    }
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    for (;;) {
      Binary::Op op;
      if (c_.cur().is_sym(Sym::Plus)) op = Binary::Op::Add;
      else if (c_.cur().is_sym(Sym::Minus)) op = Binary::Op::Sub;
      else return lhs;
      SourcePos pos = c_.cur().pos;
      c_.advance();
      lhs = make_expr(pos, Binary{op, std::move(lhs), multiplicative()});
    }
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    for (;;) {
      Binary::Op op;
      if (c_.cur().is_sym(Sym::Star)) op = Binary::Op::Mul;
      else if (c_.cur().is_sym(Sym::Slash)) op = Binary::Op::Div;
      else return lhs;
      SourcePos pos = c_.cur().pos;
      c_.advance();
      lhs = make_expr(pos, Binary{op, std::move(lhs), unary()});
    }
  }

  ExprPtr unary() {
    if (c_.cur().is_sym(Sym::Minus)) {
      SourcePos pos = c_.cur().pos;
      c_.advance();
      return make_expr(pos, Unary{Unary::Op::Neg, unary()});
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    for (;;) {
      if (c_.cur().is_sym(Sym::Dot)) {
        SourcePos pos = c_.cur().pos;
        c_.advance();
        const Token& t = c_.cur();
        if (t.type != Token::Type::Ident && t.type != Token::Type::Keyword) {
          c_.fail("expected attribute name after '.'");
        }
        std::string attr = t.text;
        c_.advance();
        e = make_expr(pos, PathStep{std::move(e), std::move(attr)});
        continue;
      }
      if (c_.cur().is_sym(Sym::LBracket)) {
        SourcePos pos = c_.cur().pos;
        c_.advance();
        ExprPtr index = expr();
        c_.expect_sym(Sym::RBracket, "']'");
        e = make_expr(pos, IndexStep{std::move(e), std::move(index)});
        continue;
      }
      return e;
    }
  }

  ExprPtr primary() {
    const Token& t = c_.cur();
    SourcePos pos = t.pos;
    switch (t.type) {
      case Token::Type::Int: {
        int64_t v = t.int_value;
        c_.advance();
        return make_expr(pos, Literal{Value::integer(v)});
      }
      case Token::Type::Float: {
        double v = t.float_value;
        c_.advance();
        return make_expr(pos, Literal{Value::real(v)});
      }
      case Token::Type::String: {
        std::string s = t.text;
        c_.advance();
        return make_expr(pos, Literal{Value::string(std::move(s))});
      }
      case Token::Type::Keyword:
        switch (t.kw) {
          case Kw::True: c_.advance(); return make_expr(pos, Literal{Value::boolean(true)});
          case Kw::False: c_.advance(); return make_expr(pos, Literal{Value::boolean(false)});
          case Kw::Null: c_.advance(); return make_expr(pos, Literal{Value::null()});
          case Kw::Missing: c_.advance(); return make_expr(pos, Literal{Value::missing()});
          case Kw::Group:
            // The special GROUP BY variable; usable in expressions despite
            // lexing as a keyword.
            c_.advance();
            return make_expr(pos, VarRef{"group"});
          default:
            c_.fail("unexpected keyword in expression");
        }
      case Token::Type::Ident: {
        std::string name = t.text;
        c_.advance();
        if (c_.cur().is_sym(Sym::LParen)) {
          c_.advance();
          FuncCall call;
          call.name = std::move(name);
          if (c_.accept_sym(Sym::Star)) {
            call.star = true;
            c_.expect_sym(Sym::RParen, "')'");
          } else {
            if (!c_.cur().is_sym(Sym::RParen)) {
              do {
                call.args.push_back(expr());
              } while (c_.accept_sym(Sym::Comma));
            }
            c_.expect_sym(Sym::RParen, "')'");
          }
          return make_expr(pos, std::move(call));
        }
        return make_expr(pos, VarRef{std::move(name)});
      }
      case Token::Type::Symbol:
        switch (t.sym) {
          case Sym::LParen: {
            c_.advance();
            QueryPtr q = query();
            c_.expect_sym(Sym::RParen, "')'");
            return subquery_expr(pos, std::move(q));
          }
          case Sym::AtSign: {
            QueryPtr q = annotated();
            return make_expr(pos, Subquery{std::move(q)});
          }
          case Sym::LBrace: {
            c_.advance();
            TupleCtor ctor;
            if (!c_.cur().is_sym(Sym::RBrace) && !c_.cur().is_sym(Sym::BagClose)) {
              do {
                std::string name = attr_name_word();
                c_.expect_sym(Sym::Colon, "':'");
                ExprPtr v = expr();
                for (const auto& prev : ctor.attrs) {
                  if (prev.first == name) {
                    c_.fail_code("DuplicateAttribute",
                                 "duplicate tuple attribute '" + name + "'");
                  }
                }
                ctor.attrs.emplace_back(std::move(name), std::move(v));
              } while (c_.accept_sym(Sym::Comma));
            }
            c_.expect_rbrace();
            return make_expr(pos, std::move(ctor));
          }
          case Sym::LBracket: {
            c_.advance();
            ArrayCtor ctor;
            if (!c_.cur().is_sym(Sym::RBracket)) {
              do {
                ctor.elems.push_back(expr());
              } while (c_.accept_sym(Sym::Comma));
            }
            c_.expect_sym(Sym::RBracket, "']'");
            return make_expr(pos, std::move(ctor));
          }
          case Sym::BagOpen: {
            c_.advance();
            BagCtor ctor;
            if (!c_.cur().is_sym(Sym::BagClose) && !c_.cur().is_sym(Sym::RBrace)) {
              do {
                ctor.elems.push_back(expr());
              } while (c_.accept_sym(Sym::Comma));
            }
            c_.expect_bag_close();
            return make_expr(pos, std::move(ctor));
          }
          default:
            break;
        }
        c_.fail("expected expression");
      case Token::Type::End:
        c_.fail("expected expression");
    }
    c_.fail("expected expression");
  }

  std::string attr_name_word() {
    const Token& t = c_.cur();
    if (t.type == Token::Type::Ident || t.type == Token::Type::Keyword ||
        t.type == Token::Type::String) {
      std::string name = t.text;
      c_.advance();
      return name;
    }
    c_.fail("expected attribute name");
  }

  Cursor& c_;
};

}  // namespace

ast::QueryPtr parse_query(std::string_view src) {
  Cursor cursor(tokenize(src));
  QueryParser p(cursor);
  return p.parse_top();
}

Value parse_value_literal(std::string_view src) {
  Cursor cursor(tokenize(src));
  ValueParser p(cursor);
  Value v = p.parse(true);
  if (!cursor.cur().is_end()) cursor.fail("expected end of value");
  return v;
}

std::vector<NamedValue> parse_environment(std::string_view src) {
  Cursor cursor(tokenize(src));
  std::vector<NamedValue> out;
  while (!cursor.cur().is_end()) {
    const Token& t = cursor.cur();
    std::string name;
    if (t.type == Token::Type::Ident || t.type == Token::Type::String) {
      name = t.text;
      cursor.advance();
    } else {
      cursor.fail("expected named value");
    }
    cursor.expect_sym(Sym::DoubleColon, "'::'");
    ValueParser vp(cursor);
    Value v = vp.parse(true);
    for (const auto& existing : out) {
      if (existing.name == name) {
        cursor.fail_code("DuplicateName", "duplicate named value '" + name + "'");
      }
    }
    out.push_back({std::move(name), std::move(v)});
  }
  return out;
}

std::vector<std::string> split_statements(std::string_view src) {
  std::vector<std::string> out;
  std::string cur;
  bool in_string = false;
  bool in_comment = false;
  for (size_t i = 0; i < src.size(); ++i) {
    char c = src[i];
    if (in_comment) {
      cur += c;
      if (c == '\n') in_comment = false;
      continue;
    }
    if (in_string) {
      cur += c;
      if (c == '\\' && i + 1 < src.size()) {
        cur += src[++i];
      } else if (c == '\'') {
        in_string = false;
      }
      continue;
    }
    if (c == '\'') {
      in_string = true;
      cur += c;
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      in_comment = true;
      cur += c;
      continue;
    }
    if (c == ';') {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (cur.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(cur);
  return out;
}

}  // namespace sqlpp
