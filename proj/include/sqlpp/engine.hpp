#pragma once

#include <string>
#include <vector>

#include "sqlpp/config.hpp"
#include "sqlpp/value.hpp"

namespace sqlpp {

// A loaded database plus an active profile and settings prelude. Queries run
// through parse -> feature gates -> desugar -> evaluate.
class Session {
 public:
  Session();

  void load_environment_text(const std::string& text);
  void load_environment_file(const std::string& path);

  // Builtin profile name, or a path to a profile file.
  void set_profile(const std::string& name_or_path);
  // "group.param=option"; validated immediately, applied after the profile.
  void add_setting(const std::string& spec);
  void set_pretty(bool pretty) { pretty_ = pretty; }
  bool pretty() const { return pretty_; }

  const Profile& profile() const { return profile_; }
  const std::vector<NamedValue>& database() const { return database_; }
  std::vector<std::string> database_names() const;

  Value run(const std::string& query_text) const;
  std::string run_to_text(const std::string& query_text) const;
  // The desugared core form, pretty-printed.
  std::string core_text(const std::string& query_text) const;

 private:
  void rebuild_config();

  std::vector<NamedValue> database_;
  Profile profile_;
  std::vector<ast::ConfigSetting> prelude_;
  ConfigEnv config_;
  bool pretty_ = false;
};

}  // namespace sqlpp
