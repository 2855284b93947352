#include "sqlpp/desugar.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sqlpp/analysis.hpp"
#include "sqlpp/printer.hpp"

namespace sqlpp {

namespace {

using namespace ast;

const std::set<std::string>& aggregate_names() {
  static const std::set<std::string> names = {"count", "sum", "avg", "min", "max"};
  return names;
}

bool is_aggregate_call(const FuncCall& call) {
  std::string lowered = call.name;
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return aggregate_names().count(lowered) > 0;
}

class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}

  std::string fresh(const std::string& prefix) {
    for (int i = 1;; ++i) {
      std::string candidate = prefix + std::to_string(i);
      if (used_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::set<std::string> used_;
};

class Desugarer {
 public:
  explicit Desugarer(std::set<std::string> names) : fresh_(std::move(names)) {}

  QueryPtr query(const QueryPtr& q) {
    if (const auto* ann = ast::get_if<Annotated>(*q)) {
      return make_query(q->pos, Annotated{ann->settings, query(ann->inner)});
    }
    if (const auto* eq = ast::get_if<ExprQuery>(*q)) {
      return make_query(q->pos, ExprQuery{expr(eq->expr)});
    }
    const auto& sfw = std::get<SfwQuery>(q->node);
    return make_query(q->pos, this->sfw(sfw, q->pos));
  }

 private:
  // ---- SELECT sugar ---------------------------------------------------------

  SelectClause select_core(const SelectClause& s) {
    const auto* sugar = std::get_if<SelectSugar>(&s.node);
    if (sugar == nullptr) return s;
    TupleCtor ctor;
    for (const auto& item : sugar->items) {
      std::string alias;
      if (item.alias.has_value()) {
        alias = *item.alias;
      } else if (const auto* path = std::get_if<PathStep>(&item.expr->node)) {
        alias = path->attr;
      } else {
        throw DesugarError("MissingAlias",
                           "SELECT item has no alias and is not a path step", item.expr->pos);
      }
      for (const auto& [existing, unused] : ctor.attrs) {
        (void)unused;
        if (existing == alias) {
          throw DesugarError("DuplicateAttribute",
                             "duplicate SELECT alias '" + alias + "'", item.expr->pos);
        }
      }
      ctor.attrs.emplace_back(std::move(alias), item.expr);
    }
    SelectClause out;
    out.pos = s.pos;
    out.node = SelectElement{make_expr(s.pos, std::move(ctor))};
    return out;
  }

  // ---- GROUP BY sugar -------------------------------------------------------

  SfwQuery group_core(SfwQuery q, SourcePos pos) {
    if (!q.group_by.has_value()) {
      if (q.having) {
        throw DesugarError("HavingWithoutGroupBy", "HAVING requires a GROUP BY clause", pos);
      }
      return q;
    }

    std::vector<GroupingItem> items = *q.group_by;
    std::vector<std::pair<std::string, std::string>> expr_to_var;  // printed expr -> var
    for (auto& item : items) {
      if (!item.var.has_value()) item.var = fresh_.fresh("g");
      expr_to_var.emplace_back(print_expr(*item.expr), *item.var);
    }
    q.group_by = items;

    std::vector<std::string> from_vars = defined_vars(*q.from);
    auto rewrite = [&](const ExprPtr& e) {
      return rewrite_grouped(e, expr_to_var, from_vars);
    };
    if (q.having) q.having = rewrite(q.having);
    for (auto& item : q.order_by) item.expr = rewrite(item.expr);
    if (auto* el = std::get_if<SelectElement>(&q.select.node)) {
      el->expr = rewrite(el->expr);
    } else if (auto* at = std::get_if<SelectAttribute>(&q.select.node)) {
      at->name_expr = rewrite(at->name_expr);
      at->value_expr = rewrite(at->value_expr);
    }

    // A FROM variable surviving outside an aggregate is neither grouped nor
    // aggregated.
    auto check = [&](const ExprPtr& e) {
      if (!e) return;
      std::set<std::string> free = free_vars(*e);
      for (const auto& v : from_vars) {
        if (free.count(v) > 0) {
          throw DesugarError("NonGroupedVariable",
                             "variable '" + v +
                                 "' is used outside an aggregate and is not a grouping expression",
                             e->pos);
        }
      }
    };
    check(q.having);
    for (const auto& item : q.order_by) check(item.expr);
    if (const auto* el = std::get_if<SelectElement>(&q.select.node)) {
      check(el->expr);
    } else if (const auto* at = std::get_if<SelectAttribute>(&q.select.node)) {
      check(at->name_expr);
      check(at->value_expr);
    }
    return q;
  }

  // Replaces grouping expressions by their variables and rewrites aggregate
  // calls over FROM variables into per-group subqueries.
  ExprPtr rewrite_grouped(const ExprPtr& e,
                          const std::vector<std::pair<std::string, std::string>>& expr_to_var,
                          const std::vector<std::string>& from_vars) {
    std::string printed = print_expr(*e);
    for (const auto& [text, var] : expr_to_var) {
      if (printed == text) return make_expr(e->pos, VarRef{var});
    }

    if (const auto* call = std::get_if<FuncCall>(&e->node)) {
      if (is_aggregate_call(*call)) {
        if (call->star) {
          FuncCall out;
          out.name = call->name;
          out.args.push_back(make_expr(e->pos, VarRef{"group"}));
          return make_expr(e->pos, std::move(out));
        }
        if (call->args.size() == 1) {
          const ExprPtr& arg = call->args[0];
          std::set<std::string> free = free_vars(*arg);
          bool uses_from_var = std::any_of(from_vars.begin(), from_vars.end(),
                                           [&](const std::string& v) { return free.count(v) > 0; });
          if (uses_from_var) {
            std::string member = fresh_.fresh("p");
            ExprPtr rewritten = substitute_member_paths(arg, from_vars, member);
            SfwQuery sub;
            sub.from = make_from(e->pos, RangeCollection{make_expr(e->pos, VarRef{"group"}),
                                                         member, std::nullopt});
            SelectClause select;
            select.pos = e->pos;
            select.node = SelectElement{std::move(rewritten)};
            sub.select = std::move(select);
            FuncCall out;
            out.name = call->name;
            out.args.push_back(
                make_expr(e->pos, Subquery{make_query(e->pos, std::move(sub))}));
            return make_expr(e->pos, std::move(out));
          }
        }
        return e;  // aggregate over group/grouping variables stays as written
      }
    }
    return map_children(e, [&](const ExprPtr& child) {
      return rewrite_grouped(child, expr_to_var, from_vars);
    });
  }

  // v -> member.v for each FROM variable free in the expression.
  ExprPtr substitute_member_paths(const ExprPtr& e, const std::vector<std::string>& from_vars,
                                  const std::string& member) {
    if (const auto* var = std::get_if<VarRef>(&e->node)) {
      if (std::find(from_vars.begin(), from_vars.end(), var->name) != from_vars.end()) {
        return make_expr(e->pos, PathStep{make_expr(e->pos, VarRef{member}), var->name});
      }
      return e;
    }
    if (std::get_if<Subquery>(&e->node) != nullptr) {
      // Conservative: a nested subquery that rebinds one of the variables
      // would need scoped substitution; free occurrences inside still refer
      // to the FROM variable, so substitute unless shadowed.
      return map_children(e, [&](const ExprPtr& child) {
        return substitute_member_paths(child, from_vars, member);
      });
    }
    return map_children(e, [&](const ExprPtr& child) {
      return substitute_member_paths(child, from_vars, member);
    });
  }

  template <typename Fn>
  ExprPtr map_children(const ExprPtr& e, Fn&& fn) {
    if (const auto* path = std::get_if<PathStep>(&e->node)) {
      ExprPtr base = fn(path->base);
      if (base == path->base) return e;
      return make_expr(e->pos, PathStep{std::move(base), path->attr});
    }
    if (const auto* idx = std::get_if<IndexStep>(&e->node)) {
      ExprPtr base = fn(idx->base);
      ExprPtr index = fn(idx->index);
      if (base == idx->base && index == idx->index) return e;
      return make_expr(e->pos, IndexStep{std::move(base), std::move(index)});
    }
    if (const auto* call = std::get_if<FuncCall>(&e->node)) {
      FuncCall out = *call;
      bool changed = false;
      for (auto& arg : out.args) {
        ExprPtr next = fn(arg);
        changed |= next != arg;
        arg = std::move(next);
      }
      return changed ? make_expr(e->pos, std::move(out)) : e;
    }
    if (const auto* un = std::get_if<Unary>(&e->node)) {
      ExprPtr operand = fn(un->operand);
      if (operand == un->operand) return e;
      return make_expr(e->pos, Unary{un->op, std::move(operand)});
    }
    if (const auto* bin = std::get_if<Binary>(&e->node)) {
      ExprPtr lhs = fn(bin->lhs);
      ExprPtr rhs = fn(bin->rhs);
      if (lhs == bin->lhs && rhs == bin->rhs) return e;
      return make_expr(e->pos, Binary{bin->op, std::move(lhs), std::move(rhs)});
    }
    if (const auto* tc = std::get_if<TupleCtor>(&e->node)) {
      TupleCtor out = *tc;
      bool changed = false;
      for (auto& [name, value] : out.attrs) {
        ExprPtr next = fn(value);
        changed |= next != value;
        value = std::move(next);
      }
      return changed ? make_expr(e->pos, std::move(out)) : e;
    }
    if (const auto* ac = std::get_if<ArrayCtor>(&e->node)) {
      ArrayCtor out = *ac;
      bool changed = false;
      for (auto& el : out.elems) {
        ExprPtr next = fn(el);
        changed |= next != el;
        el = std::move(next);
      }
      return changed ? make_expr(e->pos, std::move(out)) : e;
    }
    if (const auto* bc = std::get_if<BagCtor>(&e->node)) {
      BagCtor out = *bc;
      bool changed = false;
      for (auto& el : out.elems) {
        ExprPtr next = fn(el);
        changed |= next != el;
        el = std::move(next);
      }
      return changed ? make_expr(e->pos, std::move(out)) : e;
    }
    if (std::get_if<Subquery>(&e->node) != nullptr) {
      // Grouping rewrites do not descend into subqueries wholesale; the
      // NonGroupedVariable check still sees stray FROM variables because
      // free_vars accounts for subquery scoping.
      return e;
    }
    return e;  // Literal, VarRef
  }

  // ---- FROM sugar -----------------------------------------------------------

  FromItemPtr from(const FromItemPtr& f) {
    if (const auto* rc = std::get_if<RangeCollection>(&f->node)) {
      ExprPtr e = expr(rc->expr);
      if (e == rc->expr) return f;
      return make_from(f->pos, RangeCollection{std::move(e), rc->elem_var, rc->pos_var});
    }
    if (const auto* rt = std::get_if<RangeTuple>(&f->node)) {
      ExprPtr e = expr(rt->expr);
      if (e == rt->expr) return f;
      return make_from(f->pos, RangeTuple{std::move(e), rt->name_var, rt->value_var});
    }
    if (const auto* c = std::get_if<Correlate>(&f->node)) {
      return make_from(f->pos, Correlate{c->kind, from(c->left), from(c->right)});
    }
    if (const auto* fc = std::get_if<FullCorrelate>(&f->node)) {
      check_independent(*fc->left, *fc->right, f->pos);
      return make_from(f->pos,
                       FullCorrelate{from(fc->left), from(fc->right), expr(fc->cond)});
    }
    if (const auto* cc = std::get_if<CartesianComma>(&f->node)) {
      std::vector<std::string> left_vars = defined_vars(*cc->left);
      std::set<std::string> right_free = free_vars_from(*cc->right);
      for (const auto& v : left_vars) {
        if (right_free.count(v) > 0) {
          throw DesugarError("CommaUsesLeftVariables",
                             "comma-joined item references left-side variable '" + v + "'",
                             f->pos);
        }
      }
      return make_from(f->pos,
                       Correlate{Correlate::Kind::Inner, from(cc->left), from(cc->right)});
    }
    if (const auto* j = std::get_if<Join>(&f->node)) {
      if (j->kind == Join::Kind::Full) {
        check_independent(*j->left, *j->right, f->pos);
        return make_from(f->pos, FullCorrelate{from(j->left), from(j->right), expr(j->cond)});
      }
      FromItemPtr left = j->left;
      FromItemPtr right = j->right;
      Correlate::Kind kind =
          j->kind == Join::Kind::Inner ? Correlate::Kind::Inner : Correlate::Kind::Left;
      if (j->kind == Join::Kind::Right) std::swap(left, right);
      const auto* range = std::get_if<RangeCollection>(&right->node);
      if (range == nullptr || range->pos_var.has_value()) {
        throw DesugarError("JoinItemNotSimple",
                           "the joined item must have the form `expr AS var`", right->pos);
      }
      // l JOIN r AS y ON c  =>  l CORRELATE (FROM r AS y WHERE c SELECT ELEMENT y) AS y
      SfwQuery sub;
      sub.from = make_from(right->pos, RangeCollection{range->expr, range->elem_var, std::nullopt});
      sub.where = j->cond;
      SelectClause select;
      select.pos = right->pos;
      select.node = SelectElement{make_expr(right->pos, VarRef{range->elem_var})};
      sub.select = std::move(select);
      QueryPtr sub_query = query(make_query(right->pos, std::move(sub)));
      FromItemPtr rewritten = make_from(
          right->pos, RangeCollection{make_expr(right->pos, Subquery{std::move(sub_query)}),
                                      range->elem_var, std::nullopt});
      return make_from(f->pos, Correlate{kind, from(left), std::move(rewritten)});
    }
    const auto& fl = std::get<Flatten>(f->node);
    if (!path_rooted_at(*fl.expr2, fl.var1)) {
      throw DesugarError("FlattenNotAPath",
                         "the second FLATTEN expression must be a path rooted at '" + fl.var1 + "'",
                         fl.expr2->pos);
    }
    Correlate::Kind kind =
        fl.kind == Flatten::Kind::Inner ? Correlate::Kind::Inner : Correlate::Kind::Left;
    return make_from(
        f->pos,
        Correlate{kind,
                  make_from(f->pos, RangeCollection{expr(fl.expr1), fl.var1, std::nullopt}),
                  make_from(f->pos, RangeCollection{expr(fl.expr2), fl.var2, std::nullopt})});
  }

  void check_independent(const FromItem& l, const FromItem& r, SourcePos pos) {
    std::vector<std::string> lv = defined_vars(l);
    std::set<std::string> rf = free_vars_from(r);
    for (const auto& v : lv) {
      if (rf.count(v) > 0) {
        throw DesugarError("FullCorrelateDependent",
                           "FULL CORRELATE sides must be independent; right side uses '" + v + "'",
                           pos);
      }
    }
    std::vector<std::string> rv = defined_vars(r);
    std::set<std::string> lf = free_vars_from(l);
    for (const auto& v : rv) {
      if (lf.count(v) > 0) {
        throw DesugarError("FullCorrelateDependent",
                           "FULL CORRELATE sides must be independent; left side uses '" + v + "'",
                           pos);
      }
    }
  }

  static bool path_rooted_at(const Expr& e, const std::string& var) {
    if (const auto* v = std::get_if<VarRef>(&e.node)) return v->name == var;
    if (const auto* path = std::get_if<PathStep>(&e.node)) return path_rooted_at(*path->base, var);
    if (const auto* idx = std::get_if<IndexStep>(&e.node)) return path_rooted_at(*idx->base, var);
    return false;
  }

  // ---- expressions ----------------------------------------------------------

  ExprPtr expr(const ExprPtr& e) {
    if (const auto* call = std::get_if<FuncCall>(&e->node)) {
      if (call->star) {
        throw DesugarError("StarCallOutsideGroupBy",
                           "f(*) is only defined inside a grouped query", e->pos);
      }
    }
    if (const auto* sub = std::get_if<Subquery>(&e->node)) {
      QueryPtr inner = query(sub->query);
      if (inner == sub->query) return e;
      return make_expr(e->pos, Subquery{std::move(inner)});
    }
    return map_children(e, [&](const ExprPtr& child) { return expr(child); });
  }

  decltype(Query::node) sfw(SfwQuery q, SourcePos pos) {
    q.select = select_core(q.select);
    q = group_core(std::move(q), pos);
    q.from = from(q.from);
    if (q.where) q.where = expr(q.where);
    if (q.having) q.having = expr(q.having);
    if (q.group_by.has_value()) {
      for (auto& item : *q.group_by) item.expr = expr(item.expr);
    }
    for (auto& item : q.order_by) item.expr = expr(item.expr);
    if (q.limit) q.limit = expr(q.limit);
    if (q.offset) q.offset = expr(q.offset);
    if (auto* el = std::get_if<SelectElement>(&q.select.node)) {
      el->expr = expr(el->expr);
    } else if (auto* at = std::get_if<SelectAttribute>(&q.select.node)) {
      at->name_expr = expr(at->name_expr);
      at->value_expr = expr(at->value_expr);
    }
    if (q.set_op.has_value()) q.set_op->rhs = query(q.set_op->rhs);
    return q;
  }

  FreshNames fresh_;
};

class CoreScanner {
 public:
  bool core = true;

  void query(const Query& q) {
    if (const auto* ann = ast::get_if<Annotated>(q)) {
      query(*ann->inner);
      return;
    }
    if (const auto* eq = ast::get_if<ExprQuery>(q)) {
      expr(*eq->expr);
      return;
    }
    const auto* sfw = ast::get_if<SfwQuery>(q);
    if (sfw == nullptr) return;
    from(*sfw->from);
    if (std::get_if<SelectSugar>(&sfw->select.node) != nullptr) core = false;
    if (sfw->group_by.has_value()) {
      for (const auto& item : *sfw->group_by) {
        if (!item.var.has_value()) core = false;
        expr(*item.expr);
      }
    }
    if (const auto* el = std::get_if<SelectElement>(&sfw->select.node)) expr(*el->expr);
    if (const auto* at = std::get_if<SelectAttribute>(&sfw->select.node)) {
      expr(*at->name_expr);
      expr(*at->value_expr);
    }
    if (sfw->where) expr(*sfw->where);
    if (sfw->having) expr(*sfw->having);
    for (const auto& item : sfw->order_by) expr(*item.expr);
    if (sfw->limit) expr(*sfw->limit);
    if (sfw->offset) expr(*sfw->offset);
    if (sfw->set_op.has_value()) query(*sfw->set_op->rhs);
  }

  void from(const FromItem& f) {
    if (std::get_if<CartesianComma>(&f.node) != nullptr ||
        std::get_if<Join>(&f.node) != nullptr || std::get_if<Flatten>(&f.node) != nullptr) {
      core = false;
      return;
    }
    if (const auto* rc = std::get_if<RangeCollection>(&f.node)) {
      expr(*rc->expr);
    } else if (const auto* rt = std::get_if<RangeTuple>(&f.node)) {
      expr(*rt->expr);
    } else if (const auto* c = std::get_if<Correlate>(&f.node)) {
      from(*c->left);
      from(*c->right);
    } else if (const auto* fc = std::get_if<FullCorrelate>(&f.node)) {
      from(*fc->left);
      from(*fc->right);
      expr(*fc->cond);
    }
  }

  void expr(const Expr& e) {
    if (const auto* call = std::get_if<FuncCall>(&e.node)) {
      if (call->star) core = false;
      for (const auto& arg : call->args) expr(*arg);
      return;
    }
    if (const auto* path = std::get_if<PathStep>(&e.node)) return expr(*path->base);
    if (const auto* idx = std::get_if<IndexStep>(&e.node)) {
      expr(*idx->base);
      expr(*idx->index);
      return;
    }
    if (const auto* un = std::get_if<Unary>(&e.node)) return expr(*un->operand);
    if (const auto* bin = std::get_if<Binary>(&e.node)) {
      expr(*bin->lhs);
      expr(*bin->rhs);
      return;
    }
    if (const auto* tc = std::get_if<TupleCtor>(&e.node)) {
      for (const auto& [name, value] : tc->attrs) expr(*value);
      return;
    }
    if (const auto* ac = std::get_if<ArrayCtor>(&e.node)) {
      for (const auto& el : ac->elems) expr(*el);
      return;
    }
    if (const auto* bc = std::get_if<BagCtor>(&e.node)) {
      for (const auto& el : bc->elems) expr(*el);
      return;
    }
    if (const auto* sub = std::get_if<Subquery>(&e.node)) return query(*sub->query);
  }
};

}  // namespace

ast::QueryPtr desugar(const ast::QueryPtr& q) {
  Desugarer d(all_names(*q));
  return d.query(q);
}

bool is_core(const ast::Query& q) {
  CoreScanner scanner;
  scanner.query(q);
  return scanner.core;
}

}  // namespace sqlpp
