#include "sqlpp/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace sqlpp {

std::string_view option_name(Opt o) {
  switch (o) {
    case Opt::True: return "true";
    case Opt::False: return "false";
    case Opt::Null: return "null";
    case Opt::Missing: return "missing";
    case Opt::Error: return "error";
    case Opt::Yes: return "yes";
    case Opt::Counter: return "counter";
    case Opt::Singleton: return "singleton";
    case Opt::Empty: return "empty";
    case Opt::Unmodeled: return "unmodeled";
  }
  return "?";
}

std::optional<Opt> option_from(std::string_view word) {
  if (word == "true") return Opt::True;
  if (word == "false") return Opt::False;
  if (word == "null") return Opt::Null;
  if (word == "missing") return Opt::Missing;
  if (word == "error") return Opt::Error;
  if (word == "yes") return Opt::Yes;
  if (word == "counter") return Opt::Counter;
  if (word == "singleton") return Opt::Singleton;
  if (word == "empty") return Opt::Empty;
  return std::nullopt;
}

namespace {

const std::vector<Opt> kNavOpts = {Opt::Null, Opt::Missing, Opt::Error};
const std::vector<Opt> kEqFive = {Opt::True, Opt::False, Opt::Null, Opt::Missing, Opt::Error};

const std::map<std::string, std::vector<Opt>>& registry() {
  static const std::map<std::string, std::vector<Opt>> table = {
      {"tuple_nav.absent", kNavOpts},
      {"tuple_nav.type_mismatch", kNavOpts},
      {"array_nav.absent", kNavOpts},
      {"array_nav.type_mismatch", kNavOpts},
      {"eq.complex", {Opt::Yes, Opt::Error}},
      {"eq.type_mismatch", {Opt::False, Opt::Null, Opt::Missing, Opt::Error}},
      {"eq.null_eq_null", kEqFive},
      {"eq.null_eq_missing", kEqFive},
      {"eq.null_eq_value", kEqFive},
      {"eq.missing_eq_missing", kEqFive},
      {"eq.missing_eq_value", kEqFive},
      {"eq.null_and_true", kEqFive},
      {"eq.null_and_null", kEqFive},
      {"eq.null_and_missing", kEqFive},
      {"eq.missing_and_true", kEqFive},
      {"eq.missing_and_missing", kEqFive},
      {"from.bag_order", {Opt::Counter, Opt::Null, Opt::Missing, Opt::Error}},
      {"from.coerce_null_to_collection", {Opt::Singleton, Opt::Empty, Opt::Error}},
      {"from.coerce_missing_to_collection", {Opt::Singleton, Opt::Empty, Opt::Error}},
      {"from.coerce_value_to_collection", {Opt::Singleton, Opt::Error}},
      {"from.coerce_null_to_tuple", {Opt::Empty, Opt::Error}},
      {"from.coerce_missing_to_tuple", {Opt::Empty, Opt::Error}},
      {"from.no_match", {Opt::Null, Opt::Missing}},
  };
  return table;
}

}  // namespace

bool registry_has_param(std::string_view param) {
  return registry().count(std::string(param)) > 0;
}

bool registry_allows(std::string_view param, Opt option) {
  auto it = registry().find(std::string(param));
  if (it == registry().end()) return false;
  return std::find(it->second.begin(), it->second.end(), option) != it->second.end();
}

std::vector<std::string> registry_params() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

Opt ConfigEnv::lookup(std::string_view param, SourcePos pos) const {
  auto it = settings_.find(std::string(param));
  if (it == settings_.end()) {
    throw ConfigError("UnknownParameter", "unknown config parameter '" + std::string(param) + "'",
                      pos);
  }
  if (it->second == Opt::Unmodeled) {
    throw EvalError(EvalCode::FeatureGated,
                    "parameter '" + std::string(param) +
                        "' is unmodeled in this profile (partial or inconsistent support)",
                    pos);
  }
  return it->second;
}

ConfigEnv ConfigEnv::with(const ast::ConfigSetting& setting) const {
  std::string key = setting.group + "." + setting.param;
  if (!registry_has_param(key)) {
    throw ConfigError("UnknownParameter", "unknown config parameter '" + key + "'", setting.pos);
  }
  std::optional<Opt> opt = option_from(setting.option);
  if (!opt.has_value() || !registry_allows(key, *opt)) {
    throw ConfigError("IllegalOption",
                      "option '" + setting.option + "' is illegal for parameter '" + key + "'",
                      setting.pos);
  }
  ConfigEnv out = *this;
  out.settings_[key] = *opt;
  return out;
}

ConfigEnv ConfigEnv::with_all(const std::vector<ast::ConfigSetting>& settings) const {
  ConfigEnv out = *this;
  for (const auto& s : settings) {
    if (is_macro_group(s.group)) {
      for (const auto& expanded : expand_macro(s.group, s.param, s.option, s.pos)) {
        out = out.with(expanded);
      }
    } else {
      out = out.with(s);
    }
  }
  return out;
}

bool is_macro_group(std::string_view group) {
  return group == "nav" || group == "unknown" || group == "sql";
}

std::vector<ast::ConfigSetting> expand_macro(const std::string& group, const std::string& param,
                                             const std::string& option, SourcePos pos) {
  if (group == "nav") {
    if (param != "failure") {
      throw ConfigError("UnknownMacro", "unknown macro parameter 'nav." + param + "'", pos);
    }
    if (option != "error" && option != "null" && option != "missing") {
      throw ConfigError("IllegalOption",
                        "option '" + option + "' is illegal for macro 'nav.failure'", pos);
    }
    return {
        {"tuple_nav", "absent", option, pos},
        {"tuple_nav", "type_mismatch", option, pos},
        {"array_nav", "absent", option, pos},
        {"array_nav", "type_mismatch", option, pos},
    };
  }
  if (group == "unknown") {
    if (param != "value") {
      throw ConfigError("UnknownMacro", "unknown macro parameter 'unknown." + param + "'", pos);
    }
    if (option == "logic") {
      return {
          {"eq", "null_eq_null", "null", pos},
          {"eq", "null_eq_missing", "missing", pos},
          {"eq", "null_eq_value", "null", pos},
          {"eq", "missing_eq_missing", "missing", pos},
          {"eq", "missing_eq_value", "missing", pos},
          {"eq", "null_and_true", "null", pos},
          {"eq", "null_and_null", "null", pos},
          {"eq", "null_and_missing", "missing", pos},
          {"eq", "missing_and_true", "missing", pos},
          {"eq", "missing_and_missing", "missing", pos},
      };
    }
    if (option == "sentinel") {
      // The conjunction parameters are deliberately left untouched.
      return {
          {"eq", "null_eq_null", "true", pos},
          {"eq", "null_eq_missing", "false", pos},
          {"eq", "null_eq_value", "false", pos},
          {"eq", "missing_eq_missing", "true", pos},
          {"eq", "missing_eq_value", "false", pos},
      };
    }
    throw ConfigError("IllegalOption",
                      "option '" + option + "' is illegal for macro 'unknown.value'", pos);
  }
  if (group == "sql") {
    if (!param.empty()) {
      throw ConfigError("UnknownMacro", "macro '@sql' takes no parameters", pos);
    }
    return sql_profile_settings();
  }
  throw ConfigError("UnknownMacro", "unknown macro group '@" + group + "'", pos);
}

ConfigEnv default_config() {
  ConfigEnv env;
  auto set = [&env](const char* key, Opt o) { env.settings_[key] = o; };
  set("tuple_nav.absent", Opt::Missing);
  set("tuple_nav.type_mismatch", Opt::Missing);
  set("array_nav.absent", Opt::Missing);
  set("array_nav.type_mismatch", Opt::Missing);
  set("eq.complex", Opt::Yes);
  set("eq.type_mismatch", Opt::False);
  set("eq.null_eq_null", Opt::Null);
  set("eq.null_eq_missing", Opt::Missing);
  set("eq.null_eq_value", Opt::Null);
  set("eq.missing_eq_missing", Opt::Missing);
  set("eq.missing_eq_value", Opt::Missing);
  set("eq.null_and_true", Opt::Null);
  set("eq.null_and_null", Opt::Null);
  set("eq.null_and_missing", Opt::Missing);
  set("eq.missing_and_true", Opt::Missing);
  set("eq.missing_and_missing", Opt::Missing);
  set("from.bag_order", Opt::Counter);
  set("from.coerce_null_to_collection", Opt::Singleton);
  set("from.coerce_missing_to_collection", Opt::Singleton);
  set("from.coerce_value_to_collection", Opt::Singleton);
  set("from.coerce_null_to_tuple", Opt::Empty);
  set("from.coerce_missing_to_tuple", Opt::Empty);
  set("from.no_match", Opt::Missing);
  return env;
}

std::vector<ast::ConfigSetting> sql_profile_settings() {
  return {
      {"tuple_nav", "absent", "error", {}},
      {"tuple_nav", "type_mismatch", "error", {}},
      {"eq", "type_mismatch", "false", {}},
      {"eq", "null_eq_value", "null", {}},
      {"eq", "null_eq_null", "null", {}},
      {"from", "bag_order", "counter", {}},
      {"from", "no_match", "null", {}},
      {"from", "coerce_null_to_collection", "error", {}},
      {"from", "coerce_value_to_collection", "error", {}},
  };
}

namespace {

ShapeRules shapes_sql() {
  ShapeRules r;
  r.enforced = true;
  r.bag_elems = {.array = false, .bag = false, .tuple = true, .scalar = false, .null_ = false,
                 .heterogeneous = false};
  r.array_elems = {};
  r.tuple_attrs = {.array = false, .bag = false, .tuple = false, .scalar = true, .null_ = true,
                   .heterogeneous = true};
  return r;
}

ShapeRules shapes_cql() {
  ShapeRules r;
  r.enforced = true;
  r.bag_elems = {.array = false, .bag = false, .tuple = true, .scalar = false, .null_ = false,
                 .heterogeneous = false};
  r.array_elems = {.array = false, .bag = false, .tuple = false, .scalar = true, .null_ = false,
                   .heterogeneous = false};
  r.tuple_attrs = {.array = true, .bag = false, .tuple = false, .scalar = true, .null_ = true,
                   .heterogeneous = true};
  return r;
}

ShapeRules shapes_mongo_n1ql() {
  ShapeRules r;
  r.enforced = true;
  r.bag_elems = {.array = false, .bag = false, .tuple = true, .scalar = false, .null_ = false,
                 .heterogeneous = true};
  r.array_elems = {.array = true, .bag = false, .tuple = true, .scalar = true, .null_ = true,
                   .heterogeneous = true};
  r.tuple_attrs = {.array = true, .bag = false, .tuple = true, .scalar = true, .null_ = true,
                   .heterogeneous = true};
  return r;
}

ShapeRules shapes_aql() {
  ShapeRules r;
  r.enforced = true;
  r.bag_elems = {.array = false, .bag = false, .tuple = true, .scalar = false, .null_ = false,
                 .heterogeneous = true};
  r.bag_rule_named_only = true;
  r.array_elems = {.array = true, .bag = true, .tuple = true, .scalar = true, .null_ = true,
                   .heterogeneous = true};
  r.tuple_attrs = {.array = true, .bag = true, .tuple = true, .scalar = true, .null_ = true,
                   .heterogeneous = true};
  return r;
}

}  // namespace

Profile Profile::load(const std::string& name) {
  Profile p;
  p.name_ = name;
  p.config_ = default_config();
  auto& raw = p.config_.settings_;
  auto gate = [&p](const char* feature, GateStatus status = GateStatus::Unsupported) {
    p.gates_[feature] = status;
  };

  if (name == "default") {
    return p;
  }
  if (name == "sql") {
    for (const auto& s : sql_profile_settings()) p.config_ = p.config_.with(s);
    gate("array_nav.support");
    gate("named_value.restrict_to_from");
    gate("from.tuple");
    gate("from.inner_correlate");
    gate("from.left_correlate");
    gate("from.full_correlate");
    gate("from.full_join");
    gate("from.inner_flatten");
    gate("from.outer_flatten");
    gate("select.element");
    gate("select.attribute");
    gate("select.subquery", GateStatus::Partial);
    gate("group_by.group_var");
    p.shapes_ = shapes_sql();
    return p;
  }
  if (name == "cql") {
    raw["tuple_nav.absent"] = Opt::Error;
    raw["tuple_nav.type_mismatch"] = Opt::Error;
    raw["eq.complex"] = Opt::Error;
    raw["eq.type_mismatch"] = Opt::Error;
    raw["eq.null_eq_value"] = Opt::False;
    raw["from.bag_order"] = Opt::Error;
    raw["from.coerce_null_to_collection"] = Opt::Error;
    raw["from.coerce_value_to_collection"] = Opt::Error;
    gate("array_nav.support");
    gate("named_value.restrict_to_from");
    gate("from.subquery");
    gate("from.at");
    gate("from.tuple");
    gate("from.inner_correlate");
    gate("from.left_correlate");
    gate("from.full_correlate");
    gate("from.cartesian_product");
    gate("from.inner_join");
    gate("from.left_join");
    gate("from.full_join");
    gate("from.inner_flatten");
    gate("from.outer_flatten");
    gate("select.element");
    gate("select.attribute");
    gate("select.subquery");
    gate("select.function_call", GateStatus::Partial);
    gate("group_by.support");
    p.shapes_ = shapes_cql();
    return p;
  }
  if (name == "mongo") {
    raw["tuple_nav.absent"] = Opt::Missing;
    raw["tuple_nav.type_mismatch"] = Opt::Unmodeled;
    raw["array_nav.absent"] = Opt::Missing;
    raw["array_nav.type_mismatch"] = Opt::Missing;
    raw["eq.type_mismatch"] = Opt::False;
    raw["eq.null_eq_value"] = Opt::False;
    raw["eq.null_eq_null"] = Opt::True;
    raw["eq.null_eq_missing"] = Opt::False;
    raw["eq.missing_eq_value"] = Opt::False;
    raw["eq.missing_eq_missing"] = Opt::True;
    raw["from.bag_order"] = Opt::Error;
    raw["from.coerce_null_to_collection"] = Opt::Error;
    raw["from.coerce_missing_to_collection"] = Opt::Error;
    raw["from.coerce_value_to_collection"] = Opt::Error;
    gate("array_nav.support", GateStatus::Partial);
    gate("named_value.restrict_to_from");
    gate("from.subquery");
    gate("from.at");
    gate("from.tuple");
    gate("from.inner_correlate");
    gate("from.left_correlate");
    gate("from.full_correlate");
    gate("from.cartesian_product");
    gate("from.inner_join");
    gate("from.left_join");
    gate("from.full_join");
    gate("from.outer_flatten");
    gate("select.element");
    gate("select.attribute");
    gate("select.subquery");
    p.shapes_ = shapes_mongo_n1ql();
    return p;
  }
  if (name == "n1ql") {
    raw["tuple_nav.absent"] = Opt::Missing;
    raw["tuple_nav.type_mismatch"] = Opt::Missing;
    raw["array_nav.absent"] = Opt::Missing;
    raw["array_nav.type_mismatch"] = Opt::Missing;
    raw["eq.type_mismatch"] = Opt::False;
    raw["eq.null_eq_value"] = Opt::Unmodeled;
    raw["eq.null_eq_null"] = Opt::Unmodeled;
    raw["eq.null_eq_missing"] = Opt::Unmodeled;
    raw["eq.missing_eq_value"] = Opt::Unmodeled;
    raw["eq.missing_eq_missing"] = Opt::Unmodeled;
    raw["from.bag_order"] = Opt::Error;
    raw["from.coerce_null_to_collection"] = Opt::Error;
    raw["from.coerce_missing_to_collection"] = Opt::Error;
    raw["from.coerce_value_to_collection"] = Opt::Error;
    raw["from.no_match"] = Opt::Missing;
    gate("named_value.restrict_to_from");
    gate("from.subquery");
    gate("from.at");
    gate("from.tuple");
    gate("from.inner_correlate");
    gate("from.left_correlate");
    gate("from.full_correlate");
    gate("from.cartesian_product");
    gate("from.inner_join", GateStatus::Partial);
    gate("from.left_join", GateStatus::Partial);
    gate("from.full_join");
    gate("from.outer_flatten");
    gate("select.attribute");
    gate("select.subquery", GateStatus::Partial);
    p.shapes_ = shapes_mongo_n1ql();
    return p;
  }
  if (name == "aql") {
    raw["tuple_nav.absent"] = Opt::Null;
    raw["tuple_nav.type_mismatch"] = Opt::Error;
    raw["array_nav.absent"] = Opt::Null;
    raw["array_nav.type_mismatch"] = Opt::Error;
    raw["eq.complex"] = Opt::Error;
    raw["eq.type_mismatch"] = Opt::Error;
    raw["eq.null_eq_value"] = Opt::Null;
    raw["eq.null_eq_null"] = Opt::Null;
    raw["from.bag_order"] = Opt::Counter;
    raw["from.coerce_null_to_collection"] = Opt::Error;
    raw["from.coerce_value_to_collection"] = Opt::Error;
    gate("named_value.restrict_to_from");
    gate("from.tuple");
    gate("from.left_correlate");
    gate("from.full_correlate");
    gate("from.inner_join");
    gate("from.left_join");
    gate("from.full_join");
    gate("from.outer_flatten");
    gate("select.attribute");
    p.shapes_ = shapes_aql();
    return p;
  }
  throw ConfigError("UnknownProfile", "unknown profile '" + name + "'");
}

Profile Profile::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("UnknownProfile", "cannot open profile file '" + path + "'");
  }
  Profile p;
  p.name_ = path;
  p.config_ = default_config();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("UnknownParameter",
                        "malformed profile line '" + line + "'", {lineno, 1});
    }
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (key == "gate") {
      p.gates_[value] = GateStatus::Unsupported;
      continue;
    }
    if (key == "gate_partial") {
      p.gates_[value] = GateStatus::Partial;
      continue;
    }
    auto dot = key.find('.');
    if (dot == std::string::npos) {
      throw ConfigError("UnknownParameter", "malformed parameter '" + key + "'", {lineno, 1});
    }
    ast::ConfigSetting setting{key.substr(0, dot), key.substr(dot + 1), value, {lineno, 1}};
    p.config_ = p.config_.with_all({setting});
  }
  return p;
}

std::optional<GateStatus> Profile::gate_for(std::string_view feature) const {
  auto it = gates_.find(std::string(feature));
  if (it == gates_.end()) return std::nullopt;
  return it->second;
}

// ---- static feature-gate walk ----------------------------------------------

namespace {

using namespace ast;

class GateChecker {
 public:
  GateChecker(const Profile& profile, const std::vector<std::string>& db_names)
      : profile_(profile), db_names_(db_names.begin(), db_names.end()) {}

  void check(const Query& q) { query(q, {}); }

 private:
  struct ExprCtx {
    bool in_from_range = false;
    bool in_select = false;
  };

  void require(const std::string& feature, SourcePos pos) {
    auto status = profile_.gate_for(feature);
    if (!status.has_value()) return;
    if (*status == GateStatus::Unsupported) {
      throw EvalError(EvalCode::FeatureGated,
                      "feature '" + feature + "' is not supported by profile '" +
                          profile_.name() + "'",
                      pos);
    }
    throw EvalError(EvalCode::FeatureGated,
                    "feature '" + feature + "' is unmodeled in profile '" + profile_.name() +
                        "' (partial or inconsistent support)",
                    pos);
  }

  void query(const Query& q, std::set<std::string> bound) {
    if (const auto* ann = ast::get_if<Annotated>(q)) {
      query(*ann->inner, std::move(bound));
      return;
    }
    if (const auto* eq = ast::get_if<ExprQuery>(q)) {
      expr(*eq->expr, bound, {});
      return;
    }
    const auto* sfw = ast::get_if<SfwQuery>(q);
    if (sfw == nullptr) return;

    from(*sfw->from, bound);
    if (sfw->group_by.has_value()) {
      require("group_by.support", q.pos);
      for (const auto& item : *sfw->group_by) {
        expr(*item.expr, bound, {});
        if (item.var.has_value()) bound.insert(*item.var);
      }
      bound.insert("group");
    }
    if (sfw->where) expr(*sfw->where, bound, {});
    if (sfw->having) expr(*sfw->having, bound, {});
    for (const auto& item : sfw->order_by) expr(*item.expr, bound, {});
    if (sfw->limit) expr(*sfw->limit, bound, {});
    if (sfw->offset) expr(*sfw->offset, bound, {});

    ExprCtx select_ctx;
    select_ctx.in_select = true;
    if (const auto* el = std::get_if<SelectElement>(&sfw->select.node)) {
      require("select.element", sfw->select.pos);
      expr(*el->expr, bound, select_ctx);
    } else if (const auto* at = std::get_if<SelectAttribute>(&sfw->select.node)) {
      require("select.attribute", sfw->select.pos);
      expr(*at->name_expr, bound, select_ctx);
      expr(*at->value_expr, bound, select_ctx);
    } else if (const auto* sugar = std::get_if<SelectSugar>(&sfw->select.node)) {
      for (const auto& item : sugar->items) expr(*item.expr, bound, select_ctx);
    }

    if (sfw->set_op.has_value()) query(*sfw->set_op->rhs, bound);
  }

  void range_expr(const Expr& e, std::set<std::string>& bound) {
    ExprCtx ctx;
    ctx.in_from_range = true;
    if (std::get_if<Subquery>(&e.node) != nullptr) require("from.subquery", e.pos);
    expr(e, bound, ctx);
  }

  void from(const FromItem& f, std::set<std::string>& bound) {
    if (const auto* rc = std::get_if<RangeCollection>(&f.node)) {
      if (rc->pos_var.has_value()) require("from.at", f.pos);
      range_expr(*rc->expr, bound);
      bound.insert(rc->elem_var);
      if (rc->pos_var.has_value()) bound.insert(*rc->pos_var);
    } else if (const auto* rt = std::get_if<RangeTuple>(&f.node)) {
      require("from.tuple", f.pos);
      range_expr(*rt->expr, bound);
      bound.insert(rt->name_var);
      bound.insert(rt->value_var);
    } else if (const auto* c = std::get_if<Correlate>(&f.node)) {
      require(c->kind == Correlate::Kind::Inner ? "from.inner_correlate" : "from.left_correlate",
              f.pos);
      from(*c->left, bound);
      from(*c->right, bound);
    } else if (const auto* fc = std::get_if<FullCorrelate>(&f.node)) {
      require("from.full_correlate", f.pos);
      from(*fc->left, bound);
      from(*fc->right, bound);
      expr(*fc->cond, bound, {});
    } else if (const auto* cc = std::get_if<CartesianComma>(&f.node)) {
      require("from.cartesian_product", f.pos);
      from(*cc->left, bound);
      from(*cc->right, bound);
    } else if (const auto* j = std::get_if<Join>(&f.node)) {
      switch (j->kind) {
        case Join::Kind::Inner: require("from.inner_join", f.pos); break;
        case Join::Kind::Left:
        case Join::Kind::Right: require("from.left_join", f.pos); break;
        case Join::Kind::Full: require("from.full_join", f.pos); break;
      }
      from(*j->left, bound);
      from(*j->right, bound);
      expr(*j->cond, bound, {});
    } else if (const auto* fl = std::get_if<Flatten>(&f.node)) {
      require(fl->kind == Flatten::Kind::Inner ? "from.inner_flatten" : "from.outer_flatten",
              f.pos);
      range_expr(*fl->expr1, bound);
      bound.insert(fl->var1);
      range_expr(*fl->expr2, bound);
      bound.insert(fl->var2);
    }
  }

  void expr(const Expr& e, const std::set<std::string>& bound, ExprCtx ctx) {
    if (const auto* var = std::get_if<VarRef>(&e.node)) {
      if (var->name == "group") require("group_by.group_var", e.pos);
      if (!ctx.in_from_range && bound.count(var->name) == 0 && db_names_.count(var->name) > 0) {
        require("named_value.restrict_to_from", e.pos);
      }
      return;
    }
    if (const auto* path = std::get_if<PathStep>(&e.node)) {
      expr(*path->base, bound, ctx);
      return;
    }
    if (const auto* idx = std::get_if<IndexStep>(&e.node)) {
      require("array_nav.support", e.pos);
      expr(*idx->base, bound, ctx);
      ctx.in_from_range = false;
      expr(*idx->index, bound, ctx);
      return;
    }
    if (const auto* call = std::get_if<FuncCall>(&e.node)) {
      if (ctx.in_select) require("select.function_call", e.pos);
      for (const auto& arg : call->args) expr(*arg, bound, ctx);
      return;
    }
    if (const auto* un = std::get_if<Unary>(&e.node)) {
      expr(*un->operand, bound, ctx);
      return;
    }
    if (const auto* bin = std::get_if<Binary>(&e.node)) {
      expr(*bin->lhs, bound, ctx);
      expr(*bin->rhs, bound, ctx);
      return;
    }
    if (const auto* tc = std::get_if<TupleCtor>(&e.node)) {
      for (const auto& [name, value] : tc->attrs) expr(*value, bound, ctx);
      return;
    }
    if (const auto* ac = std::get_if<ArrayCtor>(&e.node)) {
      for (const auto& el : ac->elems) expr(*el, bound, ctx);
      return;
    }
    if (const auto* bc = std::get_if<BagCtor>(&e.node)) {
      for (const auto& el : bc->elems) expr(*el, bound, ctx);
      return;
    }
    if (const auto* sub = std::get_if<Subquery>(&e.node)) {
      if (ctx.in_select && !ctx.in_from_range) require("select.subquery", e.pos);
      query(*sub->query, bound);
      return;
    }
  }

  const Profile& profile_;
  std::set<std::string> db_names_;
};

// ---- stored value shapes ----------------------------------------------

std::string shape_signature(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Missing: return "missing";
    case Value::Kind::Null: return "null";
    case Value::Kind::Bool: return "bool";
    case Value::Kind::Int:
    case Value::Kind::Float: return "number";
    case Value::Kind::String: return "string";
    case Value::Kind::Enriched: return "enriched:" + v.enriched_type();
    case Value::Kind::Array: return "array";
    case Value::Kind::Bag: return "bag";
    case Value::Kind::Tuple: {
      std::vector<std::string> names;
      for (const auto& a : v.attrs()) names.push_back(a.name);
      std::sort(names.begin(), names.end());
      std::string sig = "tuple:";
      for (const auto& n : names) {
        sig += n;
        sig += ',';
      }
      return sig;
    }
  }
  return "?";
}

class ShapeChecker {
 public:
  ShapeChecker(const ShapeRules& rules, const std::string& profile_name)
      : rules_(rules), profile_(profile_name) {}

  void check_named(const NamedValue& nv) {
    named_ = nv.name;
    if (!nv.value.is_bag()) {
      fail("stored_named." + top_kind_word(nv.value), nv.name);
    }
    container(nv.value, /*named=*/true);
  }

 private:
  static std::string top_kind_word(const Value& v) {
    switch (v.kind()) {
      case Value::Kind::Array: return "array";
      case Value::Kind::Tuple: return "tuple";
      case Value::Kind::Null: return "null";
      case Value::Kind::Missing: return "missing";
      default: return "scalar";
    }
  }

  [[noreturn]] void fail(const std::string& feature, const std::string& name) {
    throw EvalError(EvalCode::FeatureGated,
                    "feature '" + feature + "' is not supported by profile '" + profile_ +
                        "' (named value '" + name + "')");
  }

  void container(const Value& v, bool named = false) {
    switch (v.kind()) {
      case Value::Kind::Bag: {
        if (rules_.bag_rule_named_only && !named) break;
        check_elems(v.elements(), rules_.bag_elems, "stored_bag.element_",
                    "stored_bag.heterogeneous");
        break;
      }
      case Value::Kind::Array:
        check_elems(v.elements(), rules_.array_elems, "stored_array.element_",
                    "stored_array.heterogeneous");
        break;
      case Value::Kind::Tuple:
        for (const auto& a : v.attrs()) {
          check_kind(a.value, rules_.tuple_attrs, "stored_tuple.attribute_");
        }
        break;
      default:
        return;
    }
    if (v.is_collection()) {
      for (const auto& e : v.elements()) container(e);
    } else if (v.is_tuple()) {
      for (const auto& a : v.attrs()) container(a.value);
    }
  }

  void check_elems(const std::vector<Value>& elems, const ShapeRules::Container& rule,
                   const std::string& prefix, const std::string& hetero_feature) {
    std::set<std::string> signatures;
    for (const auto& e : elems) {
      check_kind(e, rule, prefix);
      signatures.insert(shape_signature(e));
    }
    if (!rule.heterogeneous && signatures.size() > 1) fail(hetero_feature, named_);
  }

  void check_kind(const Value& v, const ShapeRules::Container& rule, const std::string& prefix) {
    switch (v.kind()) {
      case Value::Kind::Array:
        if (!rule.array) fail(prefix + "array", named_);
        return;
      case Value::Kind::Bag:
        if (!rule.bag) fail(prefix + "bag", named_);
        return;
      case Value::Kind::Tuple:
        if (!rule.tuple) fail(prefix + "tuple", named_);
        return;
      case Value::Kind::Null:
        if (!rule.null_) fail(prefix + "null", named_);
        return;
      case Value::Kind::Missing:
        fail(prefix + "missing", named_);
      default:
        if (!rule.scalar) fail(prefix + "scalar", named_);
        return;
    }
  }

  const ShapeRules& rules_;
  std::string profile_;
  std::string named_;
};

}  // namespace

void check_feature_gates(const ast::Query& q, const Profile& profile,
                         const std::vector<std::string>& database_names) {
  if (profile.gates().empty()) return;
  GateChecker(profile, database_names).check(q);
}

void check_stored_shapes(const std::vector<NamedValue>& database, const Profile& profile) {
  if (!profile.shapes().enforced) return;
  ShapeChecker checker(profile.shapes(), profile.name());
  for (const auto& nv : database) checker.check_named(nv);
}

}  // namespace sqlpp
