#include "sqlpp/printer.hpp"

#include <cctype>

namespace sqlpp {

namespace {

using namespace ast;

bool identifier_shaped(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

void quote_into(std::string& out, const std::string& s) {
  out += '\'';
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
}

void attr_name_into(std::string& out, const std::string& name) {
  if (identifier_shaped(name)) {
    out += name;
  } else {
    quote_into(out, name);
  }
}

// Precedence: OR < AND < NOT < comparisons < additive < multiplicative <
// unary minus < postfix steps.
constexpr int kPrecOr = 1;
constexpr int kPrecAnd = 2;
constexpr int kPrecNot = 3;
constexpr int kPrecCmp = 4;
constexpr int kPrecAdd = 5;
constexpr int kPrecMul = 6;
constexpr int kPrecNeg = 7;
constexpr int kPrecPostfix = 8;

struct BinInfo {
  const char* text;
  int prec;
};

BinInfo bin_info(Binary::Op op) {
  switch (op) {
    case Binary::Op::Or: return {"OR", kPrecOr};
    case Binary::Op::And: return {"AND", kPrecAnd};
    case Binary::Op::Eq: return {"=", kPrecCmp};
    case Binary::Op::Neq: return {"<>", kPrecCmp};
    case Binary::Op::Lt: return {"<", kPrecCmp};
    case Binary::Op::Le: return {"<=", kPrecCmp};
    case Binary::Op::Gt: return {">", kPrecCmp};
    case Binary::Op::Ge: return {">=", kPrecCmp};
    case Binary::Op::Add: return {"+", kPrecAdd};
    case Binary::Op::Sub: return {"-", kPrecAdd};
    case Binary::Op::Mul: return {"*", kPrecMul};
    case Binary::Op::Div: return {"/", kPrecMul};
  }
  return {"?", 0};
}

class Printer {
 public:
  std::string out;

  void query(const Query& q) {
    if (const auto* sfw = ast::get_if<SfwQuery>(q)) {
      this->sfw(*sfw);
    } else if (const auto* eq = ast::get_if<ExprQuery>(q)) {
      expr(*eq->expr, 0);
    } else if (const auto* ann = ast::get_if<Annotated>(q)) {
      for (const auto& s : ann->settings) {
        out += '@';
        out += s.group;
        if (!s.param.empty()) {
          out += " {";
          out += s.param;
          out += ": ";
          out += s.option;
          out += '}';
        }
        out += ' ';
      }
      out += '(';
      query(*ann->inner);
      out += ')';
    }
  }

  void sfw(const SfwQuery& q) {
    select(q.select);
    out += " FROM ";
    from(*q.from);
    if (q.where) {
      out += " WHERE ";
      expr(*q.where, 0);
    }
    if (q.group_by.has_value()) {
      out += " GROUP BY ";
      bool first = true;
      for (const auto& item : *q.group_by) {
        if (!first) out += ", ";
        first = false;
        expr(*item.expr, 0);
        if (item.var.has_value()) {
          out += " AS ";
          out += *item.var;
        }
      }
    }
    if (q.having) {
      out += " HAVING ";
      expr(*q.having, 0);
    }
    if (q.set_op.has_value()) {
      switch (q.set_op->op) {
        case SetOpClause::Op::Union: out += " UNION"; break;
        case SetOpClause::Op::Intersect: out += " INTERSECT"; break;
        case SetOpClause::Op::Except: out += " EXCEPT"; break;
      }
      if (q.set_op->all) out += " ALL";
      out += ' ';
      query(*q.set_op->rhs);
    }
    if (!q.order_by.empty()) {
      out += " ORDER BY ";
      bool first = true;
      for (const auto& item : q.order_by) {
        if (!first) out += ", ";
        first = false;
        expr(*item.expr, 0);
        if (item.descending) out += " DESC";
      }
    }
    if (q.limit) {
      out += " LIMIT ";
      expr(*q.limit, 0);
    }
    if (q.offset) {
      out += " OFFSET ";
      expr(*q.offset, 0);
    }
  }

  void select(const SelectClause& s) {
    if (const auto* el = std::get_if<SelectElement>(&s.node)) {
      out += "SELECT ELEMENT ";
      expr(*el->expr, 0);
    } else if (const auto* at = std::get_if<SelectAttribute>(&s.node)) {
      out += "SELECT ATTRIBUTE ";
      expr(*at->name_expr, 0);
      out += " : ";
      expr(*at->value_expr, 0);
    } else if (const auto* sugar = std::get_if<SelectSugar>(&s.node)) {
      out += "SELECT ";
      bool first = true;
      for (const auto& item : sugar->items) {
        if (!first) out += ", ";
        first = false;
        expr(*item.expr, 0);
        if (item.alias.has_value()) {
          out += " AS ";
          out += *item.alias;
        }
      }
    }
  }

  void from(const FromItem& f) {
    if (const auto* rc = std::get_if<RangeCollection>(&f.node)) {
      expr(*rc->expr, 0);
      out += " AS ";
      out += rc->elem_var;
      if (rc->pos_var.has_value()) {
        out += " AT ";
        out += *rc->pos_var;
      }
    } else if (const auto* rt = std::get_if<RangeTuple>(&f.node)) {
      expr(*rt->expr, 0);
      out += " AS {";
      out += rt->name_var;
      out += ": ";
      out += rt->value_var;
      out += '}';
    } else if (const auto* c = std::get_if<Correlate>(&f.node)) {
      from(*c->left);
      out += c->kind == Correlate::Kind::Inner ? " INNER CORRELATE " : " LEFT CORRELATE ";
      from(*c->right);
    } else if (const auto* fc = std::get_if<FullCorrelate>(&f.node)) {
      from(*fc->left);
      out += " FULL CORRELATE ";
      from(*fc->right);
      out += " ON ";
      expr(*fc->cond, 0);
    } else if (const auto* cc = std::get_if<CartesianComma>(&f.node)) {
      from(*cc->left);
      out += ", ";
      from(*cc->right);
    } else if (const auto* j = std::get_if<Join>(&f.node)) {
      from(*j->left);
      switch (j->kind) {
        case Join::Kind::Inner: out += " INNER JOIN "; break;
        case Join::Kind::Left: out += " LEFT JOIN "; break;
        case Join::Kind::Right: out += " RIGHT JOIN "; break;
        case Join::Kind::Full: out += " FULL JOIN "; break;
      }
      from(*j->right);
      out += " ON ";
      expr(*j->cond, 0);
    } else if (const auto* fl = std::get_if<Flatten>(&f.node)) {
      out += fl->kind == Flatten::Kind::Inner ? "INNER FLATTEN(" : "OUTER FLATTEN(";
      expr(*fl->expr1, 0);
      out += " AS ";
      out += fl->var1;
      out += ", ";
      expr(*fl->expr2, 0);
      out += " AS ";
      out += fl->var2;
      out += ')';
    }
  }

  void expr(const Expr& e, int parent_prec) {
    if (const auto* lit = std::get_if<Literal>(&e.node)) {
      out += serialize(lit->value);
    } else if (const auto* var = std::get_if<VarRef>(&e.node)) {
      out += var->name;
    } else if (const auto* path = std::get_if<PathStep>(&e.node)) {
      expr(*path->base, kPrecPostfix);
      out += '.';
      out += path->attr;
    } else if (const auto* idx = std::get_if<IndexStep>(&e.node)) {
      expr(*idx->base, kPrecPostfix);
      out += '[';
      expr(*idx->index, 0);
      out += ']';
    } else if (const auto* call = std::get_if<FuncCall>(&e.node)) {
      out += call->name;
      out += '(';
      if (call->star) {
        out += '*';
      } else {
        bool first = true;
        for (const auto& arg : call->args) {
          if (!first) out += ", ";
          first = false;
          expr(*arg, 0);
        }
      }
      out += ')';
    } else if (const auto* un = std::get_if<Unary>(&e.node)) {
      if (un->op == Unary::Op::Not) {
        maybe_paren(parent_prec, kPrecNot, [&] {
          out += "NOT ";
          expr(*un->operand, kPrecNot);
        });
      } else {
        maybe_paren(parent_prec, kPrecNeg, [&] {
          out += '-';
          // Parenthesize a nested negation; `--` would start a comment.
          expr(*un->operand, kPrecPostfix);
        });
      }
    } else if (const auto* bin = std::get_if<Binary>(&e.node)) {
      BinInfo info = bin_info(bin->op);
      maybe_paren(parent_prec, info.prec, [&] {
        expr(*bin->lhs, info.prec);
        out += ' ';
        out += info.text;
        out += ' ';
        expr(*bin->rhs, info.prec + 1);
      });
    } else if (const auto* tc = std::get_if<TupleCtor>(&e.node)) {
      out += '{';
      bool first = true;
      for (const auto& [name, value] : tc->attrs) {
        if (!first) out += ", ";
        first = false;
        attr_name_into(out, name);
        out += ": ";
        expr(*value, 0);
      }
      out += '}';
    } else if (const auto* ac = std::get_if<ArrayCtor>(&e.node)) {
      out += '[';
      bool first = true;
      for (const auto& el : ac->elems) {
        if (!first) out += ", ";
        first = false;
        expr(*el, 0);
      }
      out += ']';
    } else if (const auto* bc = std::get_if<BagCtor>(&e.node)) {
      out += "{{";
      bool first = true;
      for (const auto& el : bc->elems) {
        if (!first) out += ", ";
        first = false;
        expr(*el, 0);
      }
      out += "}}";
    } else if (const auto* sub = std::get_if<Subquery>(&e.node)) {
      if (ast::get_if<Annotated>(*sub->query) != nullptr) {
        query(*sub->query);  // annotations carry their own parentheses
      } else {
        out += '(';
        query(*sub->query);
        out += ')';
      }
    }
  }

  template <typename Fn>
  void maybe_paren(int parent_prec, int prec, Fn&& fn) {
    bool paren = prec < parent_prec;
    if (paren) out += '(';
    fn();
    if (paren) out += ')';
  }
};

}  // namespace

std::string print_query(const ast::Query& q) {
  Printer p;
  p.query(q);
  return p.out;
}

std::string print_expr(const ast::Expr& e) {
  Printer p;
  p.expr(e, 0);
  return p.out;
}

std::string print_from_item(const ast::FromItem& f) {
  Printer p;
  p.from(f);
  return p.out;
}

}  // namespace sqlpp
