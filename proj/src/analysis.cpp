#include "sqlpp/analysis.hpp"

namespace sqlpp {

namespace {

using namespace ast;

void collect_defined(const FromItem& f, std::vector<std::string>& out) {
  if (const auto* rc = std::get_if<RangeCollection>(&f.node)) {
    out.push_back(rc->elem_var);
    if (rc->pos_var.has_value()) out.push_back(*rc->pos_var);
  } else if (const auto* rt = std::get_if<RangeTuple>(&f.node)) {
    out.push_back(rt->name_var);
    out.push_back(rt->value_var);
  } else if (const auto* c = std::get_if<Correlate>(&f.node)) {
    collect_defined(*c->left, out);
    collect_defined(*c->right, out);
  } else if (const auto* fc = std::get_if<FullCorrelate>(&f.node)) {
    collect_defined(*fc->left, out);
    collect_defined(*fc->right, out);
  } else if (const auto* cc = std::get_if<CartesianComma>(&f.node)) {
    collect_defined(*cc->left, out);
    collect_defined(*cc->right, out);
  } else if (const auto* j = std::get_if<Join>(&f.node)) {
    collect_defined(*j->left, out);
    collect_defined(*j->right, out);
  } else if (const auto* fl = std::get_if<Flatten>(&f.node)) {
    out.push_back(fl->var1);
    out.push_back(fl->var2);
  }
}

struct FreeVarWalker {
  std::set<std::string> free;

  void expr(const Expr& e, const std::set<std::string>& bound) {
    if (const auto* var = std::get_if<VarRef>(&e.node)) {
      if (bound.count(var->name) == 0) free.insert(var->name);
    } else if (const auto* path = std::get_if<PathStep>(&e.node)) {
      expr(*path->base, bound);
    } else if (const auto* idx = std::get_if<IndexStep>(&e.node)) {
      expr(*idx->base, bound);
      expr(*idx->index, bound);
    } else if (const auto* call = std::get_if<FuncCall>(&e.node)) {
      for (const auto& arg : call->args) expr(*arg, bound);
    } else if (const auto* un = std::get_if<Unary>(&e.node)) {
      expr(*un->operand, bound);
    } else if (const auto* bin = std::get_if<Binary>(&e.node)) {
      expr(*bin->lhs, bound);
      expr(*bin->rhs, bound);
    } else if (const auto* tc = std::get_if<TupleCtor>(&e.node)) {
      for (const auto& [name, value] : tc->attrs) expr(*value, bound);
    } else if (const auto* ac = std::get_if<ArrayCtor>(&e.node)) {
      for (const auto& el : ac->elems) expr(*el, bound);
    } else if (const auto* bc = std::get_if<BagCtor>(&e.node)) {
      for (const auto& el : bc->elems) expr(*el, bound);
    } else if (const auto* sub = std::get_if<Subquery>(&e.node)) {
      query(*sub->query, bound);
    }
  }

  void query(const Query& q, std::set<std::string> bound) {
    if (const auto* ann = ast::get_if<Annotated>(q)) {
      query(*ann->inner, std::move(bound));
      return;
    }
    if (const auto* eq = ast::get_if<ExprQuery>(q)) {
      expr(*eq->expr, bound);
      return;
    }
    const auto* sfw = ast::get_if<SfwQuery>(q);
    if (sfw == nullptr) return;
    from(*sfw->from, bound);
    if (sfw->where) expr(*sfw->where, bound);
    if (sfw->group_by.has_value()) {
      for (const auto& item : *sfw->group_by) expr(*item.expr, bound);
      for (const auto& item : *sfw->group_by) {
        if (item.var.has_value()) bound.insert(*item.var);
      }
      bound.insert("group");
    }
    if (sfw->having) expr(*sfw->having, bound);
    for (const auto& item : sfw->order_by) expr(*item.expr, bound);
    if (sfw->limit) expr(*sfw->limit, bound);
    if (sfw->offset) expr(*sfw->offset, bound);
    if (const auto* el = std::get_if<SelectElement>(&sfw->select.node)) {
      expr(*el->expr, bound);
    } else if (const auto* at = std::get_if<SelectAttribute>(&sfw->select.node)) {
      expr(*at->name_expr, bound);
      expr(*at->value_expr, bound);
    } else if (const auto* sugar = std::get_if<SelectSugar>(&sfw->select.node)) {
      for (const auto& item : sugar->items) expr(*item.expr, bound);
    }
    if (sfw->set_op.has_value()) query(*sfw->set_op->rhs, bound);
  }

  // Correlation makes left-side variables visible to the right.
  void from(const FromItem& f, std::set<std::string>& bound) {
    if (const auto* rc = std::get_if<RangeCollection>(&f.node)) {
      expr(*rc->expr, bound);
      bound.insert(rc->elem_var);
      if (rc->pos_var.has_value()) bound.insert(*rc->pos_var);
    } else if (const auto* rt = std::get_if<RangeTuple>(&f.node)) {
      expr(*rt->expr, bound);
      bound.insert(rt->name_var);
      bound.insert(rt->value_var);
    } else if (const auto* c = std::get_if<Correlate>(&f.node)) {
      from(*c->left, bound);
      from(*c->right, bound);
    } else if (const auto* fc = std::get_if<FullCorrelate>(&f.node)) {
      from(*fc->left, bound);
      from(*fc->right, bound);
      expr(*fc->cond, bound);
    } else if (const auto* cc = std::get_if<CartesianComma>(&f.node)) {
      from(*cc->left, bound);
      from(*cc->right, bound);
    } else if (const auto* j = std::get_if<Join>(&f.node)) {
      from(*j->left, bound);
      from(*j->right, bound);
      expr(*j->cond, bound);
    } else if (const auto* fl = std::get_if<Flatten>(&f.node)) {
      expr(*fl->expr1, bound);
      bound.insert(fl->var1);
      expr(*fl->expr2, bound);
      bound.insert(fl->var2);
    }
  }
};

struct NameWalker {
  std::set<std::string> names;

  void expr(const Expr& e) {
    if (const auto* var = std::get_if<VarRef>(&e.node)) {
      names.insert(var->name);
    } else if (const auto* path = std::get_if<PathStep>(&e.node)) {
      expr(*path->base);
    } else if (const auto* idx = std::get_if<IndexStep>(&e.node)) {
      expr(*idx->base);
      expr(*idx->index);
    } else if (const auto* call = std::get_if<FuncCall>(&e.node)) {
      for (const auto& arg : call->args) expr(*arg);
    } else if (const auto* un = std::get_if<Unary>(&e.node)) {
      expr(*un->operand);
    } else if (const auto* bin = std::get_if<Binary>(&e.node)) {
      expr(*bin->lhs);
      expr(*bin->rhs);
    } else if (const auto* tc = std::get_if<TupleCtor>(&e.node)) {
      for (const auto& [name, value] : tc->attrs) expr(*value);
    } else if (const auto* ac = std::get_if<ArrayCtor>(&e.node)) {
      for (const auto& el : ac->elems) expr(*el);
    } else if (const auto* bc = std::get_if<BagCtor>(&e.node)) {
      for (const auto& el : bc->elems) expr(*el);
    } else if (const auto* sub = std::get_if<Subquery>(&e.node)) {
      query(*sub->query);
    }
  }

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
    if (sfw->where) expr(*sfw->where);
    if (sfw->group_by.has_value()) {
      for (const auto& item : *sfw->group_by) {
        expr(*item.expr);
        if (item.var.has_value()) names.insert(*item.var);
      }
    }
    if (sfw->having) expr(*sfw->having);
    for (const auto& item : sfw->order_by) expr(*item.expr);
    if (sfw->limit) expr(*sfw->limit);
    if (sfw->offset) expr(*sfw->offset);
    if (const auto* el = std::get_if<SelectElement>(&sfw->select.node)) {
      expr(*el->expr);
    } else if (const auto* at = std::get_if<SelectAttribute>(&sfw->select.node)) {
      expr(*at->name_expr);
      expr(*at->value_expr);
    } else if (const auto* sugar = std::get_if<SelectSugar>(&sfw->select.node)) {
      for (const auto& item : sugar->items) expr(*item.expr);
    }
    if (sfw->set_op.has_value()) query(*sfw->set_op->rhs);
  }

  void from(const FromItem& f) {
    std::vector<std::string> defined;
    collect_defined(f, defined);
    for (auto& d : defined) names.insert(std::move(d));
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
    } else if (const auto* cc = std::get_if<CartesianComma>(&f.node)) {
      from(*cc->left);
      from(*cc->right);
    } else if (const auto* j = std::get_if<Join>(&f.node)) {
      from(*j->left);
      from(*j->right);
      expr(*j->cond);
    } else if (const auto* fl = std::get_if<Flatten>(&f.node)) {
      expr(*fl->expr1);
      expr(*fl->expr2);
    }
  }
};

}  // namespace

std::vector<std::string> defined_vars(const ast::FromItem& f) {
  std::vector<std::string> out;
  collect_defined(f, out);
  return out;
}

std::set<std::string> free_vars(const ast::Expr& e) {
  FreeVarWalker w;
  w.expr(e, {});
  return w.free;
}

std::set<std::string> free_vars(const ast::Query& q) {
  FreeVarWalker w;
  w.query(q, {});
  return w.free;
}

std::set<std::string> free_vars_from(const ast::FromItem& f) {
  FreeVarWalker w;
  std::set<std::string> bound;
  w.from(f, bound);
  return w.free;
}

std::set<std::string> all_names(const ast::Query& q) {
  NameWalker w;
  w.query(q);
  return w.names;
}

}  // namespace sqlpp
