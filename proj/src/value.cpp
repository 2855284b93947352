#include "sqlpp/value.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>

namespace sqlpp {

Value Value::null() {
  Value v;
  v.kind_ = Kind::Null;
  return v;
}

Value Value::boolean(bool b) {
  Value v;
  v.kind_ = Kind::Bool;
  v.bool_ = b;
  return v;
}

Value Value::integer(int64_t i) {
  Value v;
  v.kind_ = Kind::Int;
  v.int_ = i;
  return v;
}

Value Value::real(double d) {
  Value v;
  v.kind_ = Kind::Float;
  v.float_ = d;
  return v;
}

Value Value::string(std::string s) {
  Value v;
  v.kind_ = Kind::String;
  v.str_ = std::move(s);
  return v;
}

Value Value::enriched(std::string type_name, std::vector<Value> args) {
  assert(!type_name.empty());
  Value v;
  v.kind_ = Kind::Enriched;
  v.str_ = std::move(type_name);
  v.elems_ = std::move(args);
  return v;
}

Value Value::tuple(std::vector<Attr> attrs) {
  Value v;
  v.kind_ = Kind::Tuple;
  v.attrs_.reserve(attrs.size());
  for (auto& a : attrs) {
    if (a.value.is_missing()) continue;  // omission rule for tuple construction
    for (const auto& prev : v.attrs_) {
      if (prev.name == a.name) {
        throw EvalError(EvalCode::DuplicateAttribute,
                        "duplicate tuple attribute '" + a.name + "'");
      }
    }
    v.attrs_.push_back(std::move(a));
  }
  return v;
}

Value Value::array(std::vector<Value> elems) {
  Value v;
  v.kind_ = Kind::Array;
  v.elems_ = std::move(elems);
  return v;
}

Value Value::bag(std::vector<Value> elems) {
  Value v;
  v.kind_ = Kind::Bag;
  v.elems_ = std::move(elems);
  return v;
}

long double Value::number_value() const {
  assert(is_number());
  if (kind_ == Kind::Int) return static_cast<long double>(int_);
  return static_cast<long double>(float_);
}

const Value* Value::attr(std::string_view name) const {
  for (const auto& a : attrs_) {
    if (a.name == name) return &a.value;
  }
  return nullptr;
}

namespace {

int kind_rank(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Missing: return 0;
    case Value::Kind::Null: return 1;
    case Value::Kind::Bool: return 2;
    case Value::Kind::Int:
    case Value::Kind::Float: return 3;
    case Value::Kind::String: return 4;
    case Value::Kind::Enriched: return 5;
    case Value::Kind::Array: return 6;
    case Value::Kind::Tuple: return 7;
    case Value::Kind::Bag: return 8;
  }
  return 9;
}

int compare_numbers(const Value& a, const Value& b) {
  long double x = a.number_value();
  long double y = b.number_value();
  if (x < y) return -1;
  if (x > y) return 1;
  return 0;
}

int compare_list(const std::vector<Value>& xs, const std::vector<Value>& ys) {
  size_t n = std::min(xs.size(), ys.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare_total(xs[i], ys[i]);
    if (c != 0) return c;
  }
  if (xs.size() < ys.size()) return -1;
  if (xs.size() > ys.size()) return 1;
  return 0;
}

std::vector<const Value::Attr*> sorted_attrs(const Value& t) {
  std::vector<const Value::Attr*> out;
  out.reserve(t.attrs().size());
  for (const auto& a : t.attrs()) out.push_back(&a);
  std::sort(out.begin(), out.end(),
            [](const Value::Attr* x, const Value::Attr* y) { return x->name < y->name; });
  return out;
}

std::vector<Value> canonical_elements(const Value& bag) {
  std::vector<Value> elems = bag.elements();
  std::stable_sort(elems.begin(), elems.end(),
                   [](const Value& x, const Value& y) { return compare_total(x, y) < 0; });
  return elems;
}

}  // namespace

int compare_total(const Value& a, const Value& b) {
  int ra = kind_rank(a), rb = kind_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case Value::Kind::Missing:
    case Value::Kind::Null:
      return 0;
    case Value::Kind::Bool:
      return (a.as_bool() ? 1 : 0) - (b.as_bool() ? 1 : 0);
    case Value::Kind::Int:
    case Value::Kind::Float:
      return compare_numbers(a, b);
    case Value::Kind::String: {
      int c = a.as_string().compare(b.as_string());
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    case Value::Kind::Enriched: {
      int c = a.enriched_type().compare(b.enriched_type());
      if (c != 0) return c < 0 ? -1 : 1;
      return compare_list(a.elements(), b.elements());
    }
    case Value::Kind::Array:
      return compare_list(a.elements(), b.elements());
    case Value::Kind::Tuple: {
      auto xs = sorted_attrs(a);
      auto ys = sorted_attrs(b);
      size_t n = std::min(xs.size(), ys.size());
      for (size_t i = 0; i < n; ++i) {
        int c = xs[i]->name.compare(ys[i]->name);
        if (c != 0) return c < 0 ? -1 : 1;
      }
      if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
      for (size_t i = 0; i < n; ++i) {
        int c = compare_total(xs[i]->value, ys[i]->value);
        if (c != 0) return c;
      }
      return 0;
    }
    case Value::Kind::Bag:
      return compare_list(canonical_elements(a), canonical_elements(b));
  }
  return 0;
}

bool structural_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) return compare_numbers(a, b) == 0;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::Missing:
    case Value::Kind::Null:
      return true;
    case Value::Kind::Bool:
      return a.as_bool() == b.as_bool();
    case Value::Kind::Int:
    case Value::Kind::Float:
      return compare_numbers(a, b) == 0;
    case Value::Kind::String:
      return a.as_string() == b.as_string();
    case Value::Kind::Enriched: {
      if (a.enriched_type() != b.enriched_type()) return false;
      if (a.elements().size() != b.elements().size()) return false;
      for (size_t i = 0; i < a.elements().size(); ++i) {
        if (!structural_equal(a.elements()[i], b.elements()[i])) return false;
      }
      return true;
    }
    case Value::Kind::Tuple: {
      if (a.attrs().size() != b.attrs().size()) return false;
      for (const auto& attr : a.attrs()) {
        const Value* other = b.attr(attr.name);
        if (other == nullptr || !structural_equal(attr.value, *other)) return false;
      }
      return true;
    }
    case Value::Kind::Array: {
      if (a.elements().size() != b.elements().size()) return false;
      for (size_t i = 0; i < a.elements().size(); ++i) {
        if (!structural_equal(a.elements()[i], b.elements()[i])) return false;
      }
      return true;
    }
    case Value::Kind::Bag: {
      // Greedy bijection matching; sound because structural equality is an
      // equivalence relation.
      if (a.elements().size() != b.elements().size()) return false;
      std::vector<bool> used(b.elements().size(), false);
      for (const auto& x : a.elements()) {
        bool matched = false;
        for (size_t j = 0; j < b.elements().size(); ++j) {
          if (used[j]) continue;
          if (structural_equal(x, b.elements()[j])) {
            used[j] = true;
            matched = true;
            break;
          }
        }
        if (!matched) return false;
      }
      return true;
    }
  }
  return false;
}

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

void append_quoted(std::string& out, const std::string& s) {
  out += '\'';
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
}

void append_number(std::string& out, const Value& v) {
  char buf[40];
  if (v.is_int()) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v.as_int());
    (void)ec;
    out.append(buf, p);
  } else {
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v.as_float());
    (void)ec;
    out.append(buf, p);
  }
}

void append_attr_name(std::string& out, const std::string& name) {
  if (is_identifier(name)) {
    out += name;
  } else {
    append_quoted(out, name);
  }
}

void serialize_to(std::string& out, const Value& v, int indent, int level);

void serialize_children(std::string& out, const Value& v, int indent, int level,
                        const char* open, const char* close) {
  const bool bag = v.is_bag();
  std::vector<Value> sorted;
  const std::vector<Value>* elems = &v.elements();
  if (bag) {
    sorted = canonical_elements(v);
    elems = &sorted;
  }
  out += open;
  if (elems->empty()) {
    out += close;
    return;
  }
  bool first = true;
  for (const auto& e : *elems) {
    if (!first) out += indent >= 0 ? "," : ", ";
    first = false;
    if (indent >= 0) {
      out += '\n';
      out.append(static_cast<size_t>(indent * (level + 1)), ' ');
    }
    serialize_to(out, e, indent, level + 1);
  }
  if (indent >= 0) {
    out += '\n';
    out.append(static_cast<size_t>(indent * level), ' ');
  }
  out += close;
}

void serialize_to(std::string& out, const Value& v, int indent, int level) {
  switch (v.kind()) {
    case Value::Kind::Missing:
      out += "missing";
      return;
    case Value::Kind::Null:
      out += "null";
      return;
    case Value::Kind::Bool:
      out += v.as_bool() ? "true" : "false";
      return;
    case Value::Kind::Int:
    case Value::Kind::Float:
      append_number(out, v);
      return;
    case Value::Kind::String:
      append_quoted(out, v.as_string());
      return;
    case Value::Kind::Enriched: {
      out += v.enriched_type();
      out += '(';
      bool first = true;
      for (const auto& arg : v.elements()) {
        if (!first) out += ", ";
        first = false;
        serialize_to(out, arg, -1, level);
      }
      out += ')';
      return;
    }
    case Value::Kind::Tuple: {
      out += '{';
      if (v.attrs().empty()) {
        out += '}';
        return;
      }
      bool first = true;
      for (const auto& a : v.attrs()) {
        if (!first) out += indent >= 0 ? "," : ", ";
        first = false;
        if (indent >= 0) {
          out += '\n';
          out.append(static_cast<size_t>(indent * (level + 1)), ' ');
        }
        append_attr_name(out, a.name);
        out += ": ";
        serialize_to(out, a.value, indent, level + 1);
      }
      if (indent >= 0) {
        out += '\n';
        out.append(static_cast<size_t>(indent * level), ' ');
      }
      out += '}';
      return;
    }
    case Value::Kind::Array:
      serialize_children(out, v, indent, level, "[", "]");
      return;
    case Value::Kind::Bag:
      serialize_children(out, v, indent, level, "{{", "}}");
      return;
  }
}

}  // namespace

std::string serialize(const Value& v) {
  std::string out;
  serialize_to(out, v, -1, 0);
  return out;
}

std::string serialize_pretty(const Value& v) {
  std::string out;
  serialize_to(out, v, 2, 0);
  return out;
}

void BindingTuple::bind(std::string name, Value v) {
  if (contains(name)) {
    throw EvalError(EvalCode::DuplicateAttribute,
                    "duplicate binding '" + name + "'");
  }
  entries_.emplace_back(std::move(name), std::move(v));
}

const Value* BindingTuple::find(std::string_view name) const {
  for (const auto& [n, v] : entries_) {
    if (n == name) return &v;
  }
  return nullptr;
}

BindingTuple BindingTuple::concat(const BindingTuple& a, const BindingTuple& b) {
  BindingTuple out = a;
  for (const auto& [n, v] : b.entries_) {
    if (!out.contains(n)) out.entries_.emplace_back(n, v);
  }
  return out;
}

Value BindingTuple::reify() const {
  std::vector<Value::Attr> attrs;
  attrs.reserve(entries_.size());
  for (const auto& [n, v] : entries_) attrs.push_back({n, v});
  return Value::tuple(std::move(attrs));
}

std::string_view eval_code_name(EvalCode code) {
  switch (code) {
    case EvalCode::NavError: return "NavError";
    case EvalCode::TypeMismatch: return "TypeMismatch";
    case EvalCode::CoercionError: return "CoercionError";
    case EvalCode::NotAString: return "NotAString";
    case EvalCode::NonBooleanCondition: return "NonBooleanCondition";
    case EvalCode::FeatureGated: return "FeatureGated";
    case EvalCode::BagOrderError: return "BagOrderError";
    case EvalCode::LimitNotInt: return "LimitNotInt";
    case EvalCode::UnsupportedSetOp: return "UnsupportedSetOp";
    case EvalCode::DivideByZero: return "DivideByZero";
    case EvalCode::DuplicateAttribute: return "DuplicateAttribute";
  }
  return "EvalError";
}

}  // namespace sqlpp
