#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqlpp/engine.hpp"
#include "sqlpp/error.hpp"
#include "sqlpp/parser.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitEval = 2;
constexpr int kExitGated = 3;

struct ErrorReport {
  int exit_code;
  std::string code;
  std::string message;
  sqlpp::SourcePos pos;
};

ErrorReport classify(const std::exception& ex) {
  if (const auto* lex = dynamic_cast<const sqlpp::LexError*>(&ex)) {
    return {kExitParse, lex->code(), lex->what(), lex->pos()};
  }
  if (const auto* parse = dynamic_cast<const sqlpp::ParseError*>(&ex)) {
    return {kExitParse, parse->code(), parse->what(), parse->pos()};
  }
  if (const auto* eval = dynamic_cast<const sqlpp::EvalError*>(&ex)) {
    int code = eval->eval_code() == sqlpp::EvalCode::FeatureGated ? kExitGated : kExitEval;
    return {code, eval->code(), eval->what(), eval->pos()};
  }
  if (const auto* err = dynamic_cast<const sqlpp::Error*>(&ex)) {
    return {kExitEval, err->code(), err->what(), err->pos()};
  }
  return {kExitEval, "InternalError", ex.what(), {}};
}

void report(const std::string& file, const ErrorReport& err) {
  std::cerr << file << ':' << err.pos.line << ':' << err.pos.col << ": " << err.code << ": "
            << err.message << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sqlpp::Error("IoError", "cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_file(sqlpp::Session& session, const std::string& path, bool emit_core) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& ex) {
    report(path, classify(ex));
    return kExitEval;
  }
  std::vector<std::string> statements = sqlpp::split_statements(text);
  if (statements.empty()) {
    report(path, {kExitParse, "ParseError", "empty query file", {1, 1}});
    return kExitParse;
  }
  for (const auto& stmt : statements) {
    try {
      if (emit_core) {
        std::cout << session.core_text(stmt) << '\n';
      } else {
        std::cout << session.run_to_text(stmt) << '\n';
      }
    } catch (const std::exception& ex) {
      ErrorReport err = classify(ex);
      report(path, err);
      return err.exit_code;
    }
  }
  return kExitOk;
}

// One `\command` line, or a `;`-terminated query. Errors print inline and the
// loop continues.
int repl(sqlpp::Session& session) {
  const bool interactive = isatty(fileno(stdin)) != 0;
  std::string buffer;
  std::string line;
  auto run_buffered = [&]() {
    for (const auto& stmt : sqlpp::split_statements(buffer)) {
      try {
        std::cout << session.run_to_text(stmt) << '\n';
      } catch (const std::exception& ex) {
        report("<repl>", classify(ex));
      }
    }
    buffer.clear();
  };

  if (interactive) std::cout << "sqlpp> " << std::flush;
  while (std::getline(std::cin, line)) {
    std::string trimmed = line;
    auto b = trimmed.find_first_not_of(" \t\r");
    trimmed = b == std::string::npos ? std::string() : trimmed.substr(b);
    if (!trimmed.empty() && trimmed[0] == '\\' && buffer.empty()) {
      std::istringstream words(trimmed);
      std::string cmd;
      words >> cmd;
      try {
        if (cmd == "\\q") {
          return kExitOk;
        } else if (cmd == "\\env") {
          std::string path;
          words >> path;
          session.load_environment_file(path);
        } else if (cmd == "\\profile") {
          std::string name;
          words >> name;
          session.set_profile(name);
        } else if (cmd == "\\set") {
          std::string param, option;
          words >> param >> option;
          session.add_setting(param + "=" + option);
        } else if (cmd == "\\core") {
          std::string rest;
          std::getline(words, rest);
          std::cout << session.core_text(rest) << '\n';
        } else {
          std::cerr << "<repl>:1:1: UnknownCommand: " << cmd << '\n';
        }
      } catch (const std::exception& ex) {
        report("<repl>", classify(ex));
      }
      if (interactive) std::cout << "sqlpp> " << std::flush;
      continue;
    }
    buffer += line;
    buffer += '\n';
    if (buffer.find(';') != std::string::npos) {
      run_buffered();
      if (interactive) std::cout << "sqlpp> " << std::flush;
    }
  }
  if (buffer.find_first_not_of(" \t\r\n") != std::string::npos) run_buffered();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SQL++ reference engine"};
  std::string env_path;
  std::string profile;
  std::vector<std::string> settings;
  std::string query_file;
  bool emit_core = false;
  bool pretty = false;

  app.add_option("--env", env_path, "environment file of `name :: value` entries");
  app.add_option("--profile", profile, "profile name (default/sql/cql/mongo/n1ql/aql) or file");
  app.add_option("--set", settings, "config override, group.param=option (repeatable)");
  app.add_flag("--emit-core", emit_core, "print the desugared core query instead of evaluating");
  app.add_flag("--pretty", pretty, "indented output");
  app.add_option("query_file", query_file, "file with one or more `;`-separated queries");
  CLI11_PARSE(app, argc, argv);

  sqlpp::Session session;
  session.set_pretty(pretty);
  try {
    if (!profile.empty()) session.set_profile(profile);
    for (const auto& s : settings) session.add_setting(s);
    if (!env_path.empty()) session.load_environment_file(env_path);
  } catch (const std::exception& ex) {
    ErrorReport err = classify(ex);
    report(env_path.empty() ? "<args>" : env_path, err);
    return err.exit_code;
  }

  if (query_file.empty()) return repl(session);
  return run_file(session, query_file, emit_core);
}
