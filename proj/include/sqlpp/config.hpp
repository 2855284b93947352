#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlpp/ast.hpp"
#include "sqlpp/error.hpp"
#include "sqlpp/value.hpp"

namespace sqlpp {

// Every option any parameter can take. `Unmodeled` marks dialect-profile
// cells whose real-world semantics are inconsistent; it cannot be set via
// annotations and raises a diagnostic when consulted.
enum class Opt {
  True, False, Null, Missing, Error,
  Yes, Counter, Singleton, Empty, Unmodeled,
};

std::string_view option_name(Opt o);

// Parameter -> option map. Fully populated (profile over defaults), so
// lookups never dangle. Immutable; `with` returns a copy.
class ConfigEnv {
 public:
  ConfigEnv() = default;

  // Innermost setting wins; falls back to the profile, then to defaults.
  Opt lookup(std::string_view param, SourcePos pos = {}) const;

  // Applies one validated `group.param: option` setting (macros expanded
  // first); the new setting shadows the existing one.
  ConfigEnv with(const ast::ConfigSetting& setting) const;
  ConfigEnv with_all(const std::vector<ast::ConfigSetting>& settings) const;

  const std::map<std::string, Opt>& settings() const { return settings_; }

 private:
  friend class Profile;
  friend ConfigEnv default_config();
  std::map<std::string, Opt> settings_;
};

// The closed parameter registry: `group.param` -> legal options.
bool registry_has_param(std::string_view param);
bool registry_allows(std::string_view param, Opt option);
std::vector<std::string> registry_params();

// Parses an option token; nullopt when the word is not an option at all.
std::optional<Opt> option_from(std::string_view word);

// Expands a macro annotation (`nav.failure` or `unknown.value`) into its
// coordinated per-parameter settings. Throws ConfigError(UnknownMacro /
// IllegalOption).
std::vector<ast::ConfigSetting> expand_macro(const std::string& group,
                                             const std::string& param,
                                             const std::string& option,
                                             SourcePos pos = {});

// True if `group` names a macro group rather than a registry group.
bool is_macro_group(std::string_view group);

enum class GateStatus { Unsupported, Partial };

// How a dialect restricts stored values (named kind plus per-container
// element kinds). Checked when a database is used under the profile.
struct ShapeRules {
  bool enforced = false;
  struct Container {
    bool array = false;
    bool bag = false;
    bool tuple = false;
    bool scalar = false;
    bool null_ = false;
    bool heterogeneous = false;
  };
  Container bag_elems;
  Container array_elems;
  Container tuple_attrs;
  // Bag element restrictions apply to named bags only; nested bags are free.
  bool bag_rule_named_only = false;
};

class Profile {
 public:
  static Profile load(const std::string& name);  // default/sql/cql/mongo/n1ql/aql
  // Text file of `group.param: option` and `gate: feature` lines; `#` comments.
  static Profile load_file(const std::string& path);

  const std::string& name() const { return name_; }
  const ConfigEnv& config() const { return config_; }
  const std::map<std::string, GateStatus>& gates() const { return gates_; }
  const ShapeRules& shapes() const { return shapes_; }

  std::optional<GateStatus> gate_for(std::string_view feature) const;

 private:
  std::string name_;
  ConfigEnv config_;
  std::map<std::string, GateStatus> gates_;
  ShapeRules shapes_;
};

ConfigEnv default_config();

// The explicit settings of the sql profile, for the bare `@sql` annotation.
std::vector<ast::ConfigSetting> sql_profile_settings();

// Pre-evaluation static walk: reports the first gated syntactic feature the
// query uses, as EvalError(FeatureGated). Decisions depend on the AST (and
// the database's names), never on data.
void check_feature_gates(const ast::Query& q, const Profile& profile,
                         const std::vector<std::string>& database_names);

// Table-driven stored-value validation for dialect profiles.
void check_stored_shapes(const std::vector<NamedValue>& database, const Profile& profile);

}  // namespace sqlpp
