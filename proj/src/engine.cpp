#include "sqlpp/engine.hpp"

#include <fstream>
#include <sstream>

#include "sqlpp/desugar.hpp"
#include "sqlpp/eval.hpp"
#include "sqlpp/parser.hpp"
#include "sqlpp/printer.hpp"

namespace sqlpp {

Session::Session() : profile_(Profile::load("default")) { rebuild_config(); }

void Session::load_environment_text(const std::string& text) {
  database_ = parse_environment(text);
}

void Session::load_environment_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open environment file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  load_environment_text(buf.str());
}

void Session::set_profile(const std::string& name_or_path) {
  if (name_or_path == "default" || name_or_path == "sql" || name_or_path == "cql" ||
      name_or_path == "mongo" || name_or_path == "n1ql" || name_or_path == "aql") {
    profile_ = Profile::load(name_or_path);
  } else if (name_or_path.find('/') != std::string::npos ||
             name_or_path.find('.') != std::string::npos) {
    profile_ = Profile::load_file(name_or_path);
  } else {
    throw ConfigError("UnknownProfile", "unknown profile '" + name_or_path + "'");
  }
  rebuild_config();
}

void Session::add_setting(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("IllegalOption", "expected group.param=option, got '" + spec + "'");
  }
  std::string key = spec.substr(0, eq);
  std::string option = spec.substr(eq + 1);
  auto dot = key.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("UnknownParameter", "expected group.param=option, got '" + spec + "'");
  }
  ast::ConfigSetting setting{key.substr(0, dot), key.substr(dot + 1), option, {}};
  config_.with_all({setting});  // validate eagerly
  prelude_.push_back(std::move(setting));
  rebuild_config();
}

void Session::rebuild_config() { config_ = profile_.config().with_all(prelude_); }

std::vector<std::string> Session::database_names() const {
  std::vector<std::string> names;
  names.reserve(database_.size());
  for (const auto& nv : database_) names.push_back(nv.name);
  return names;
}

Value Session::run(const std::string& query_text) const {
  ast::QueryPtr parsed = parse_query(query_text);
  check_feature_gates(*parsed, profile_, database_names());
  check_stored_shapes(database_, profile_);
  ast::QueryPtr core = desugar(parsed);
  BindingTuple env;
  for (const auto& nv : database_) env.bind(nv.name, nv.value);
  return eval_query(*core, env, config_);
}

std::string Session::run_to_text(const std::string& query_text) const {
  Value result = run(query_text);
  return pretty_ ? serialize_pretty(result) : serialize(result);
}

std::string Session::core_text(const std::string& query_text) const {
  ast::QueryPtr parsed = parse_query(query_text);
  return print_query(*desugar(parsed));
}

}  // namespace sqlpp
