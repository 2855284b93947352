#include "sqlpp/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sqlpp/analysis.hpp"

namespace sqlpp {

namespace {

using namespace ast;

Value option_value(Opt o, EvalCode error_code, const std::string& param, SourcePos pos) {
  switch (o) {
    case Opt::True: return Value::boolean(true);
    case Opt::False: return Value::boolean(false);
    case Opt::Null: return Value::null();
    case Opt::Missing: return Value::missing();
    case Opt::Error:
      throw EvalError(error_code, "'" + param + "' is configured to error", pos);
    default:
      throw EvalError(error_code, "option for '" + param + "' has no value form", pos);
  }
}

bool is_lattice(const Value& v) {
  return v.is_bool() || v.is_null() || v.is_missing();
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Value nav_tuple(const Value& t, const std::string& attr, const ConfigEnv& cfg, SourcePos pos) {
  if (t.is_tuple()) {
    if (const Value* v = t.attr(attr)) return *v;
    return option_value(cfg.lookup("tuple_nav.absent", pos), EvalCode::NavError,
                        "tuple_nav.absent", pos);
  }
  return option_value(cfg.lookup("tuple_nav.type_mismatch", pos), EvalCode::NavError,
                      "tuple_nav.type_mismatch", pos);
}

Value nav_array(const Value& arr, const Value& index, const ConfigEnv& cfg, SourcePos pos) {
  if (arr.is_array()) {
    if (index.is_int()) {
      int64_t i = index.as_int();  // 1-based
      if (i >= 1 && static_cast<size_t>(i) <= arr.elements().size()) {
        return arr.elements()[static_cast<size_t>(i - 1)];
      }
    }
    return option_value(cfg.lookup("array_nav.absent", pos), EvalCode::NavError,
                        "array_nav.absent", pos);
  }
  return option_value(cfg.lookup("array_nav.type_mismatch", pos), EvalCode::NavError,
                      "array_nav.type_mismatch", pos);
}

Value and_connective(const Value& p, const Value& q, const ConfigEnv& cfg, SourcePos pos) {
  if (!is_lattice(p) || !is_lattice(q)) {
    throw EvalError(EvalCode::TypeMismatch, "AND expects boolean, null or missing operands", pos);
  }
  auto is_false = [](const Value& v) { return v.is_bool() && !v.as_bool(); };
  auto is_true = [](const Value& v) { return v.is_bool() && v.as_bool(); };
  if (is_false(p) || is_false(q)) return Value::boolean(false);
  if (is_true(p) && is_true(q)) return Value::boolean(true);
  const char* param = nullptr;
  if (p.is_null() && q.is_null()) {
    param = "eq.null_and_null";
  } else if ((p.is_null() && is_true(q)) || (q.is_null() && is_true(p))) {
    param = "eq.null_and_true";
  } else if ((p.is_null() && q.is_missing()) || (q.is_null() && p.is_missing())) {
    param = "eq.null_and_missing";
  } else if (p.is_missing() && q.is_missing()) {
    param = "eq.missing_and_missing";
  } else {
    param = "eq.missing_and_true";
  }
  return option_value(cfg.lookup(param, pos), EvalCode::TypeMismatch, param, pos);
}

Value not_connective(const Value& v, SourcePos pos) {
  if (v.is_bool()) return Value::boolean(!v.as_bool());
  if (v.is_null() || v.is_missing()) return v;
  throw EvalError(EvalCode::TypeMismatch, "NOT expects a boolean, null or missing operand", pos);
}

Value or_connective(const Value& p, const Value& q, const ConfigEnv& cfg, SourcePos pos) {
  if (!is_lattice(p) || !is_lattice(q)) {
    throw EvalError(EvalCode::TypeMismatch, "OR expects boolean, null or missing operands", pos);
  }
  // De Morgan dual of the configured conjunction.
  return not_connective(and_connective(not_connective(p, pos), not_connective(q, pos), cfg, pos),
                        pos);
}

namespace {

Value eq_option(const ConfigEnv& cfg, const char* param, SourcePos pos) {
  return option_value(cfg.lookup(param, pos), EvalCode::TypeMismatch, param, pos);
}

Value f_scalar(const Value& x, const Value& y, const ConfigEnv& cfg, SourcePos pos) {
  if (x.is_number() && y.is_number()) {
    return Value::boolean(x.number_value() == y.number_value());
  }
  if (x.is_string() && y.is_string()) return Value::boolean(x.as_string() == y.as_string());
  if (x.is_bool() && y.is_bool()) return Value::boolean(x.as_bool() == y.as_bool());
  if (x.is_enriched() && y.is_enriched() && x.enriched_type() == y.enriched_type()) {
    if (x.elements().size() != y.elements().size()) return Value::boolean(false);
    for (size_t i = 0; i < x.elements().size(); ++i) {
      Value r = f_scalar(x.elements()[i], y.elements()[i], cfg, pos);
      if (!(r.is_bool() && r.as_bool())) return r;
    }
    return Value::boolean(true);
  }
  return eq_option(cfg, "eq.type_mismatch", pos);
}

Value f_complex(const Value& x, const Value& y, const ConfigEnv& cfg, SourcePos pos) {
  if (x.is_array() && y.is_array()) {
    if (x.elements().size() != y.elements().size()) return Value::boolean(false);
    Value acc = Value::boolean(true);
    for (size_t i = 0; i < x.elements().size(); ++i) {
      acc = and_connective(acc, eval_eq(x.elements()[i], y.elements()[i], cfg, pos), cfg, pos);
    }
    return acc;
  }
  if (x.is_bag() && y.is_bag()) {
    if (x.elements().size() != y.elements().size()) return Value::boolean(false);
    // The paper leaves the element matching unspecified; both sides are
    // canonically ordered before the pairwise fold.
    std::vector<Value> xs = x.elements();
    std::vector<Value> ys = y.elements();
    auto canon = [](const Value& a, const Value& b) { return compare_total(a, b) < 0; };
    std::stable_sort(xs.begin(), xs.end(), canon);
    std::stable_sort(ys.begin(), ys.end(), canon);
    Value acc = Value::boolean(true);
    for (size_t i = 0; i < xs.size(); ++i) {
      acc = and_connective(acc, eval_eq(xs[i], ys[i], cfg, pos), cfg, pos);
    }
    return acc;
  }
  if (x.is_tuple() && y.is_tuple()) {
    if (x.attrs().size() != y.attrs().size()) return Value::boolean(false);
    for (const auto& a : x.attrs()) {
      if (y.attr(a.name) == nullptr) return Value::boolean(false);
    }
    Value acc = Value::boolean(true);
    for (const auto& a : x.attrs()) {
      acc = and_connective(acc, eval_eq(a.value, *y.attr(a.name), cfg, pos), cfg, pos);
    }
    return acc;
  }
  if ((x.is_null() && y.is_complex()) || (y.is_null() && x.is_complex())) {
    return eq_option(cfg, "eq.null_eq_value", pos);
  }
  if ((x.is_missing() && y.is_complex()) || (y.is_missing() && x.is_complex())) {
    return eq_option(cfg, "eq.missing_eq_value", pos);
  }
  return eq_option(cfg, "eq.type_mismatch", pos);
}

}  // namespace

Value eval_eq(const Value& x, const Value& y, const ConfigEnv& cfg, SourcePos pos) {
  if (x.is_complex() || y.is_complex()) {
    Opt complex = cfg.lookup("eq.complex", pos);
    if (complex == Opt::Error) {
      throw EvalError(EvalCode::TypeMismatch, "'eq.complex' is configured to error", pos);
    }
    return f_complex(x, y, cfg, pos);
  }
  if (x.is_null() && y.is_null()) return eq_option(cfg, "eq.null_eq_null", pos);
  if ((x.is_null() && y.is_missing()) || (x.is_missing() && y.is_null())) {
    return eq_option(cfg, "eq.null_eq_missing", pos);
  }
  if (x.is_null() || y.is_null()) return eq_option(cfg, "eq.null_eq_value", pos);
  if (x.is_missing() && y.is_missing()) return eq_option(cfg, "eq.missing_eq_missing", pos);
  if (x.is_missing() || y.is_missing()) return eq_option(cfg, "eq.missing_eq_value", pos);
  return f_scalar(x, y, cfg, pos);
}

// ---- builtins ----------------------------------------------------------

namespace {

const std::vector<Value>& collection_arg(const std::string& name, const std::vector<Value>& args,
                                         SourcePos pos) {
  if (args.size() != 1 || !args[0].is_collection()) {
    throw EvalError(EvalCode::TypeMismatch, name + " expects one collection argument", pos);
  }
  return args[0].elements();
}

Value agg_sum(const std::vector<Value>& elems, SourcePos pos, bool average) {
  int64_t int_sum = 0;
  double float_sum = 0.0;
  bool any_float = false;
  size_t count = 0;
  for (const auto& e : elems) {
    if (e.is_null() || e.is_missing()) continue;
    if (!e.is_number()) {
      throw EvalError(EvalCode::TypeMismatch, "aggregate over a non-numeric element", pos);
    }
    ++count;
    if (e.is_int() && !any_float) {
      int_sum += e.as_int();
    } else {
      if (!any_float) {
        any_float = true;
        float_sum = static_cast<double>(int_sum);
      }
      float_sum += static_cast<double>(e.number_value());
    }
  }
  if (count == 0) return Value::null();
  if (average) {
    double total = any_float ? float_sum : static_cast<double>(int_sum);
    return Value::real(total / static_cast<double>(count));
  }
  return any_float ? Value::real(float_sum) : Value::integer(int_sum);
}

Value agg_extreme(const std::vector<Value>& elems, bool want_max) {
  const Value* best = nullptr;
  for (const auto& e : elems) {
    if (e.is_null() || e.is_missing()) continue;
    if (best == nullptr) {
      best = &e;
      continue;
    }
    int c = compare_total(e, *best);
    if ((want_max && c > 0) || (!want_max && c < 0)) best = &e;
  }
  return best == nullptr ? Value::null() : *best;
}

}  // namespace

Value eval_builtin(const std::string& name, const std::vector<Value>& args, SourcePos pos) {
  std::string fn = lowercase(name);
  if (fn == "count") {
    return Value::integer(static_cast<int64_t>(collection_arg(fn, args, pos).size()));
  }
  if (fn == "sum") return agg_sum(collection_arg(fn, args, pos), pos, /*average=*/false);
  if (fn == "avg") return agg_sum(collection_arg(fn, args, pos), pos, /*average=*/true);
  if (fn == "min") return agg_extreme(collection_arg(fn, args, pos), /*want_max=*/false);
  if (fn == "max") return agg_extreme(collection_arg(fn, args, pos), /*want_max=*/true);

  // Any other call is an enriched-value constructor over primitives.
  for (const auto& arg : args) {
    if (!(arg.is_bool() || arg.is_number() || arg.is_string())) {
      throw EvalError(EvalCode::TypeMismatch,
                      "unknown function '" + name + "' (enriched values take primitives)", pos);
    }
  }
  return Value::enriched(name, args);
}

// ---- expression evaluation ----------------------------------------------

namespace {

Value unknown_propagate(const Value& x, const Value& y) {
  // Null wins over missing, per the comparison contract.
  if (x.is_null() || y.is_null()) return Value::null();
  return Value::missing();
}

bool has_unknown(const Value& x, const Value& y) {
  return x.is_null() || x.is_missing() || y.is_null() || y.is_missing();
}

Value eval_compare(Binary::Op op, const Value& x, const Value& y, SourcePos pos) {
  if (has_unknown(x, y)) return unknown_propagate(x, y);
  int c;
  if (x.is_number() && y.is_number()) {
    long double a = x.number_value(), b = y.number_value();
    c = a < b ? -1 : a > b ? 1 : 0;
  } else if (x.is_string() && y.is_string()) {
    int r = x.as_string().compare(y.as_string());
    c = r < 0 ? -1 : r > 0 ? 1 : 0;
  } else {
    throw EvalError(EvalCode::TypeMismatch, "comparison expects two numbers or two strings", pos);
  }
  switch (op) {
    case Binary::Op::Lt: return Value::boolean(c < 0);
    case Binary::Op::Le: return Value::boolean(c <= 0);
    case Binary::Op::Gt: return Value::boolean(c > 0);
    case Binary::Op::Ge: return Value::boolean(c >= 0);
    default: throw std::logic_error("not a comparison");
  }
}

Value eval_arith(Binary::Op op, const Value& x, const Value& y, SourcePos pos) {
  if (has_unknown(x, y)) return unknown_propagate(x, y);
  if (!x.is_number() || !y.is_number()) {
    throw EvalError(EvalCode::TypeMismatch, "arithmetic expects numeric operands", pos);
  }
  if (x.is_int() && y.is_int()) {
    int64_t a = x.as_int(), b = y.as_int();
    switch (op) {
      case Binary::Op::Add: return Value::integer(a + b);
      case Binary::Op::Sub: return Value::integer(a - b);
      case Binary::Op::Mul: return Value::integer(a * b);
      case Binary::Op::Div:
        if (b == 0) throw EvalError(EvalCode::DivideByZero, "division by zero", pos);
        return Value::integer(a / b);
      default: throw std::logic_error("not arithmetic");
    }
  }
  double a = static_cast<double>(x.number_value());
  double b = static_cast<double>(y.number_value());
  switch (op) {
    case Binary::Op::Add: return Value::real(a + b);
    case Binary::Op::Sub: return Value::real(a - b);
    case Binary::Op::Mul: return Value::real(a * b);
    case Binary::Op::Div:
      if (b == 0.0) throw EvalError(EvalCode::DivideByZero, "division by zero", pos);
      return Value::real(a / b);
    default: throw std::logic_error("not arithmetic");
  }
}

class Evaluator {
 public:
  Value query(const Query& q, const BindingTuple& env, const ConfigEnv& cfg) {
    if (const auto* ann = ast::get_if<Annotated>(q)) {
      ConfigEnv inner_cfg = cfg.with_all(ann->settings);
      return query(*ann->inner, env, inner_cfg);
    }
    if (const auto* eq = ast::get_if<ExprQuery>(q)) return expr(*eq->expr, env, cfg);
    const auto& sfw = std::get<SfwQuery>(q.node);
    return this->sfw(sfw, q.pos, env, cfg);
  }

  Value expr(const Expr& e, const BindingTuple& env, const ConfigEnv& cfg) {
    if (const auto* lit = std::get_if<Literal>(&e.node)) return lit->value;
    if (const auto* var = std::get_if<VarRef>(&e.node)) {
      if (const Value* v = env.find(var->name)) return *v;
      throw EvalError(EvalCode::NavError, "unbound variable '" + var->name + "'", e.pos);
    }
    if (const auto* path = std::get_if<PathStep>(&e.node)) {
      return nav_tuple(expr(*path->base, env, cfg), path->attr, cfg, e.pos);
    }
    if (const auto* idx = std::get_if<IndexStep>(&e.node)) {
      Value base = expr(*idx->base, env, cfg);
      Value index = expr(*idx->index, env, cfg);
      return nav_array(base, index, cfg, e.pos);
    }
    if (const auto* call = std::get_if<FuncCall>(&e.node)) {
      if (call->star) {
        throw EvalError(EvalCode::TypeMismatch, "f(*) is only valid in a grouped query", e.pos);
      }
      std::vector<Value> args;
      args.reserve(call->args.size());
      for (const auto& arg : call->args) args.push_back(expr(*arg, env, cfg));
      return eval_builtin(call->name, args, e.pos);
    }
    if (const auto* un = std::get_if<Unary>(&e.node)) {
      Value v = expr(*un->operand, env, cfg);
      if (un->op == Unary::Op::Not) return not_connective(v, e.pos);
      if (v.is_null() || v.is_missing()) return v;
      if (v.is_int()) return Value::integer(-v.as_int());
      if (v.is_float()) return Value::real(-v.as_float());
      throw EvalError(EvalCode::TypeMismatch, "unary minus expects a number", e.pos);
    }
    if (const auto* bin = std::get_if<Binary>(&e.node)) {
      Value lhs = expr(*bin->lhs, env, cfg);
      Value rhs = expr(*bin->rhs, env, cfg);
      switch (bin->op) {
        case Binary::Op::And: return and_connective(lhs, rhs, cfg, e.pos);
        case Binary::Op::Or: return or_connective(lhs, rhs, cfg, e.pos);
        case Binary::Op::Eq: return eval_eq(lhs, rhs, cfg, e.pos);
        case Binary::Op::Neq: return not_connective(eval_eq(lhs, rhs, cfg, e.pos), e.pos);
        case Binary::Op::Lt:
        case Binary::Op::Le:
        case Binary::Op::Gt:
        case Binary::Op::Ge: return eval_compare(bin->op, lhs, rhs, e.pos);
        case Binary::Op::Add:
        case Binary::Op::Sub:
        case Binary::Op::Mul:
        case Binary::Op::Div: return eval_arith(bin->op, lhs, rhs, e.pos);
      }
    }
    if (const auto* tc = std::get_if<TupleCtor>(&e.node)) {
      std::vector<Value::Attr> attrs;
      attrs.reserve(tc->attrs.size());
      for (const auto& [name, value] : tc->attrs) {
        attrs.push_back({name, expr(*value, env, cfg)});
      }
      return Value::tuple(std::move(attrs));  // missing-valued attributes drop
    }
    if (const auto* ac = std::get_if<ArrayCtor>(&e.node)) {
      std::vector<Value> elems;
      elems.reserve(ac->elems.size());
      for (const auto& el : ac->elems) elems.push_back(expr(*el, env, cfg));
      return Value::array(std::move(elems));
    }
    if (const auto* bc = std::get_if<BagCtor>(&e.node)) {
      std::vector<Value> elems;
      elems.reserve(bc->elems.size());
      for (const auto& el : bc->elems) elems.push_back(expr(*el, env, cfg));
      return Value::bag(std::move(elems));
    }
    const auto& sub = std::get<Subquery>(e.node);
    return query(*sub.query, env, cfg);
  }

 private:
  // ---- FROM ------------------------------------------------------------

  BindingCollection from(const FromItem& f, const BindingTuple& env, const ConfigEnv& cfg) {
    if (const auto* rc = std::get_if<RangeCollection>(&f.node)) {
      return range_collection(*rc, f.pos, env, cfg);
    }
    if (const auto* rt = std::get_if<RangeTuple>(&f.node)) {
      return range_tuple(*rt, f.pos, env, cfg);
    }
    if (const auto* c = std::get_if<Correlate>(&f.node)) {
      return c->kind == Correlate::Kind::Inner ? inner_correlate(*c, env, cfg)
                                               : left_correlate(*c, env, cfg);
    }
    if (const auto* fc = std::get_if<FullCorrelate>(&f.node)) {
      return full_correlate(*fc, f.pos, env, cfg);
    }
    throw std::logic_error("sugar FROM item reached the evaluator; desugar first");
  }

  BindingCollection range_collection(const RangeCollection& rc, SourcePos pos,
                                     const BindingTuple& env, const ConfigEnv& cfg) {
    Value c = expr(*rc.expr, env, cfg);
    bool is_array = c.is_array();
    std::vector<Value> elems;
    if (c.is_collection()) {
      elems = c.elements();
    } else {
      const char* param = c.is_null()      ? "from.coerce_null_to_collection"
                          : c.is_missing() ? "from.coerce_missing_to_collection"
                                           : "from.coerce_value_to_collection";
      switch (cfg.lookup(param, pos)) {
        case Opt::Singleton:
          elems.push_back(c);
          break;
        case Opt::Empty:
          break;
        default:
          throw EvalError(EvalCode::CoercionError,
                          std::string("cannot range over this value ('") + param +
                              "' is configured to error)",
                          pos);
      }
    }
    BindingCollection out;
    for (size_t j = 0; j < elems.size(); ++j) {
      BindingTuple b;
      b.bind(rc.elem_var, elems[j]);
      if (rc.pos_var.has_value()) {
        if (is_array) {
          b.bind(*rc.pos_var, Value::integer(static_cast<int64_t>(j + 1)));
        } else {
          switch (cfg.lookup("from.bag_order", pos)) {
            case Opt::Counter:
              // Sequential positions over the bag's stored order, which is
              // arbitrary but deterministic.
              b.bind(*rc.pos_var, Value::integer(static_cast<int64_t>(j + 1)));
              break;
            case Opt::Null:
              b.bind(*rc.pos_var, Value::null());
              break;
            case Opt::Missing:
              b.bind(*rc.pos_var, Value::missing());
              break;
            default:
              throw EvalError(EvalCode::BagOrderError,
                              "position variable over a bag ('from.bag_order' is error)", pos);
          }
        }
      }
      out.tuples.push_back(std::move(b));
    }
    return out;
  }

  BindingCollection range_tuple(const RangeTuple& rt, SourcePos pos, const BindingTuple& env,
                                const ConfigEnv& cfg) {
    Value t = expr(*rt.expr, env, cfg);
    BindingCollection out;
    if (!t.is_tuple()) {
      if (t.is_null() || t.is_missing()) {
        const char* param =
            t.is_null() ? "from.coerce_null_to_tuple" : "from.coerce_missing_to_tuple";
        if (cfg.lookup(param, pos) == Opt::Empty) return out;  // ranges over {}
        throw EvalError(EvalCode::CoercionError,
                        std::string("cannot range over this value ('") + param +
                            "' is configured to error)",
                        pos);
      }
      throw EvalError(EvalCode::CoercionError, "cannot range over a non-tuple", pos);
    }
    for (const auto& a : t.attrs()) {
      BindingTuple b;
      b.bind(rt.name_var, Value::string(a.name));
      b.bind(rt.value_var, a.value);
      out.tuples.push_back(std::move(b));
    }
    return out;
  }

  BindingCollection inner_correlate(const Correlate& c, const BindingTuple& env,
                                    const ConfigEnv& cfg) {
    BindingCollection left = from(*c.left, env, cfg);
    BindingCollection out;
    for (const auto& bl : left.tuples) {
      BindingTuple right_env = BindingTuple::concat(bl, env);
      BindingCollection right = from(*c.right, right_env, cfg);
      for (const auto& br : right.tuples) {
        out.tuples.push_back(BindingTuple::concat(bl, br));
      }
    }
    return out;
  }

  BindingCollection left_correlate(const Correlate& c, const BindingTuple& env,
                                   const ConfigEnv& cfg) {
    BindingCollection left = from(*c.left, env, cfg);
    std::vector<std::string> right_vars = defined_vars(*c.right);
    BindingCollection out;
    for (const auto& bl : left.tuples) {
      BindingTuple right_env = BindingTuple::concat(bl, env);
      BindingCollection right = from(*c.right, right_env, cfg);
      if (right.tuples.empty()) {
        Value nm = option_value(cfg.lookup("from.no_match"), EvalCode::CoercionError,
                                "from.no_match", {});
        BindingTuple pad;
        for (const auto& v : right_vars) pad.bind(v, nm);
        out.tuples.push_back(BindingTuple::concat(bl, pad));
        continue;
      }
      for (const auto& br : right.tuples) {
        out.tuples.push_back(BindingTuple::concat(bl, br));
      }
    }
    return out;
  }

  BindingCollection full_correlate(const FullCorrelate& fc, SourcePos pos, const BindingTuple& env,
                                   const ConfigEnv& cfg) {
    BindingCollection left = from(*fc.left, env, cfg);
    BindingCollection right = from(*fc.right, env, cfg);
    std::vector<std::string> left_vars = defined_vars(*fc.left);
    std::vector<std::string> right_vars = defined_vars(*fc.right);
    Value nm =
        option_value(cfg.lookup("from.no_match"), EvalCode::CoercionError, "from.no_match", {});

    std::vector<bool> left_matched(left.tuples.size(), false);
    std::vector<bool> right_matched(right.tuples.size(), false);
    BindingCollection out;
    for (size_t i = 0; i < left.tuples.size(); ++i) {
      for (size_t j = 0; j < right.tuples.size(); ++j) {
        BindingTuple joined = BindingTuple::concat(left.tuples[i], right.tuples[j]);
        Value cond = expr(*fc.cond, BindingTuple::concat(joined, env), cfg);
        if (cond.is_bool() && cond.as_bool()) {
          left_matched[i] = true;
          right_matched[j] = true;
          out.tuples.push_back(std::move(joined));
        } else if (!cond.is_bool() && !cond.is_null() && !cond.is_missing()) {
          throw EvalError(EvalCode::NonBooleanCondition,
                          "correlation condition must yield a boolean or unknown", pos);
        }
      }
    }
    for (size_t i = 0; i < left.tuples.size(); ++i) {
      if (left_matched[i]) continue;
      BindingTuple pad;
      for (const auto& v : right_vars) pad.bind(v, nm);
      out.tuples.push_back(BindingTuple::concat(left.tuples[i], pad));
    }
    for (size_t j = 0; j < right.tuples.size(); ++j) {
      if (right_matched[j]) continue;
      BindingTuple pad;
      for (const auto& v : left_vars) pad.bind(v, nm);
      out.tuples.push_back(BindingTuple::concat(pad, right.tuples[j]));
    }
    return out;
  }

  // ---- clause pipeline ---------------------------------------------------

  void filter(BindingCollection& coll, const Expr& cond, const BindingTuple& env,
              const ConfigEnv& cfg) {
    std::vector<BindingTuple> kept;
    for (auto& b : coll.tuples) {
      Value v = expr(cond, BindingTuple::concat(b, env), cfg);
      if (v.is_bool()) {
        if (v.as_bool()) kept.push_back(std::move(b));
        continue;
      }
      if (v.is_null() || v.is_missing()) continue;
      throw EvalError(EvalCode::NonBooleanCondition,
                      "condition must yield a boolean or unknown", cond.pos);
    }
    coll.tuples = std::move(kept);
  }

  BindingCollection group_by(const std::vector<GroupingItem>& items, BindingCollection in,
                             const BindingTuple& env, const ConfigEnv& cfg) {
    struct Group {
      std::vector<Value> keys;
      std::vector<Value> members;  // reified binding tuples
    };
    std::vector<Group> groups;
    for (const auto& b : in.tuples) {
      BindingTuple scope = BindingTuple::concat(b, env);
      std::vector<Value> keys;
      keys.reserve(items.size());
      for (const auto& item : items) keys.push_back(expr(*item.expr, scope, cfg));
      Group* found = nullptr;
      for (auto& g : groups) {
        bool same = true;
        for (size_t k = 0; k < keys.size(); ++k) {
          if (!structural_equal(g.keys[k], keys[k])) {
            same = false;
            break;
          }
        }
        if (same) {
          found = &g;
          break;
        }
      }
      if (found == nullptr) {
        groups.push_back({keys, {}});
        found = &groups.back();
      }
      found->members.push_back(b.reify());
    }
    BindingCollection out;
    for (auto& g : groups) {
      BindingTuple b;
      for (size_t k = 0; k < items.size(); ++k) b.bind(*items[k].var, g.keys[k]);
      b.bind("group", Value::bag(std::move(g.members)));
      out.tuples.push_back(std::move(b));
    }
    return out;
  }

  void order_by(BindingCollection& coll, const std::vector<OrderItem>& items,
                const BindingTuple& env, const ConfigEnv& cfg) {
    std::vector<std::vector<Value>> keys(coll.tuples.size());
    for (size_t i = 0; i < coll.tuples.size(); ++i) {
      BindingTuple scope = BindingTuple::concat(coll.tuples[i], env);
      keys[i].reserve(items.size());
      for (const auto& item : items) keys[i].push_back(expr(*item.expr, scope, cfg));
    }
    std::vector<size_t> index(coll.tuples.size());
    std::iota(index.begin(), index.end(), 0);
    std::stable_sort(index.begin(), index.end(), [&](size_t a, size_t b) {
      for (size_t k = 0; k < items.size(); ++k) {
        int c = compare_total(keys[a][k], keys[b][k]);
        if (items[k].descending) c = -c;
        if (c != 0) return c < 0;
      }
      return false;
    });
    std::vector<BindingTuple> sorted;
    sorted.reserve(coll.tuples.size());
    for (size_t i : index) sorted.push_back(std::move(coll.tuples[i]));
    coll.tuples = std::move(sorted);
    coll.kind = BindingCollection::Kind::Array;
  }

  size_t nonnegative_int(const Expr& e, const BindingTuple& env, const ConfigEnv& cfg,
                         const char* what) {
    Value v = expr(e, env, cfg);
    if (!v.is_int() || v.as_int() < 0) {
      throw EvalError(EvalCode::LimitNotInt, std::string(what) + " must be a nonnegative integer",
                      e.pos);
    }
    return static_cast<size_t>(v.as_int());
  }

  Value sfw(const SfwQuery& q, SourcePos pos, const BindingTuple& env, const ConfigEnv& cfg) {
    if (q.set_op.has_value()) {
      throw EvalError(EvalCode::UnsupportedSetOp,
                      "set operators are not supported by the evaluator", pos);
    }
    if (std::get_if<SelectSugar>(&q.select.node) != nullptr) {
      throw std::logic_error("sugar SELECT reached the evaluator; desugar first");
    }

    BindingCollection coll = from(*q.from, env, cfg);
    if (q.where) filter(coll, *q.where, env, cfg);
    if (q.group_by.has_value()) {
      for (const auto& item : *q.group_by) {
        if (!item.var.has_value()) {
          throw std::logic_error("grouping expression without variable; desugar first");
        }
      }
      coll = group_by(*q.group_by, std::move(coll), env, cfg);
    }
    if (q.having) filter(coll, *q.having, env, cfg);
    if (!q.order_by.empty()) order_by(coll, q.order_by, env, cfg);

    // LIMIT/OFFSET expressions evaluate once in the query env, not per tuple.
    if (q.offset) {
      size_t k = nonnegative_int(*q.offset, env, cfg, "OFFSET");
      if (k >= coll.tuples.size()) {
        coll.tuples.clear();
      } else {
        coll.tuples.erase(coll.tuples.begin(), coll.tuples.begin() + static_cast<long>(k));
      }
    }
    if (q.limit) {
      size_t n = nonnegative_int(*q.limit, env, cfg, "LIMIT");
      if (coll.tuples.size() > n) coll.tuples.resize(n);
    }

    if (const auto* el = std::get_if<SelectElement>(&q.select.node)) {
      std::vector<Value> out;
      out.reserve(coll.tuples.size());
      for (const auto& b : coll.tuples) {
        out.push_back(expr(*el->expr, BindingTuple::concat(b, env), cfg));
      }
      return coll.kind == BindingCollection::Kind::Array ? Value::array(std::move(out))
                                                         : Value::bag(std::move(out));
    }
    const auto& at = std::get<SelectAttribute>(q.select.node);
    std::vector<Value::Attr> attrs;
    for (const auto& b : coll.tuples) {
      BindingTuple scope = BindingTuple::concat(b, env);
      Value name = expr(*at.name_expr, scope, cfg);
      if (!name.is_string()) {
        throw EvalError(EvalCode::NotAString, "SELECT ATTRIBUTE name must be a string",
                        at.name_expr->pos);
      }
      Value value = expr(*at.value_expr, scope, cfg);
      if (value.is_missing()) continue;
      for (const auto& prev : attrs) {
        if (prev.name == name.as_string()) {
          throw EvalError(EvalCode::DuplicateAttribute,
                          "SELECT ATTRIBUTE produced duplicate attribute '" + name.as_string() +
                              "'",
                          at.name_expr->pos);
        }
      }
      attrs.push_back({name.as_string(), std::move(value)});
    }
    return Value::tuple(std::move(attrs));
  }
};

}  // namespace

Value eval_query(const ast::Query& q, const BindingTuple& gamma_b, const ConfigEnv& gamma_c) {
  Evaluator ev;
  return ev.query(q, gamma_b, gamma_c);
}

Value eval_expr(const ast::Expr& e, const BindingTuple& gamma_b, const ConfigEnv& gamma_c) {
  Evaluator ev;
  return ev.expr(e, gamma_b, gamma_c);
}

}  // namespace sqlpp
