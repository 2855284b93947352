#include "sqlpp/lexer.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace sqlpp {

Kw keyword_from(std::string_view lowered) {
  static const std::unordered_map<std::string_view, Kw> table = {
      {"select", Kw::Select}, {"element", Kw::Element}, {"attribute", Kw::Attribute},
      {"from", Kw::From},     {"where", Kw::Where},     {"group", Kw::Group},
      {"by", Kw::By},         {"having", Kw::Having},   {"order", Kw::Order},
      {"asc", Kw::Asc},       {"desc", Kw::Desc},       {"limit", Kw::Limit},
      {"offset", Kw::Offset}, {"union", Kw::Union},     {"intersect", Kw::Intersect},
      {"except", Kw::Except}, {"all", Kw::All},         {"as", Kw::As},
      {"at", Kw::At},         {"inner", Kw::Inner},     {"left", Kw::Left},
      {"right", Kw::Right},   {"full", Kw::Full},       {"outer", Kw::Outer},
      {"correlate", Kw::Correlate}, {"join", Kw::Join}, {"on", Kw::On},
      {"flatten", Kw::Flatten}, {"and", Kw::And},       {"or", Kw::Or},
      {"not", Kw::Not},       {"true", Kw::True},       {"false", Kw::False},
      {"null", Kw::Null},     {"missing", Kw::Missing},
  };
  auto it = table.find(lowered);
  return it == table.end() ? Kw::None : it->second;
}

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      if (at_end()) {
        Token t;
        t.type = Token::Type::End;
        t.pos = pos();
        out.push_back(t);
        return out;
      }
      out.push_back(next_token());
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  SourcePos pos() const { return {line_, col_}; }

  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '-' && peek(1) == '-') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      return;
    }
  }

  Token symbol(Sym s, int len) {
    Token t;
    t.type = Token::Type::Symbol;
    t.sym = s;
    t.pos = pos();
    for (int k = 0; k < len; ++k) advance();
    return t;
  }

  Token next_token() {
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident_or_keyword();
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '\'') return string_literal();
    switch (c) {
      case '(': return symbol(Sym::LParen, 1);
      case ')': return symbol(Sym::RParen, 1);
      case '[': return symbol(Sym::LBracket, 1);
      case ']': return symbol(Sym::RBracket, 1);
      case '{': return peek(1) == '{' ? symbol(Sym::BagOpen, 2) : symbol(Sym::LBrace, 1);
      case '}': return peek(1) == '}' ? symbol(Sym::BagClose, 2) : symbol(Sym::RBrace, 1);
      case ',': return symbol(Sym::Comma, 1);
      case ':': return peek(1) == ':' ? symbol(Sym::DoubleColon, 2) : symbol(Sym::Colon, 1);
      case '.': return symbol(Sym::Dot, 1);
      case ';': return symbol(Sym::Semicolon, 1);
      case '@': return symbol(Sym::AtSign, 1);
      case '*': return symbol(Sym::Star, 1);
      case '+': return symbol(Sym::Plus, 1);
      case '-': return symbol(Sym::Minus, 1);
      case '/': return symbol(Sym::Slash, 1);
      case '=': return symbol(Sym::Eq, 1);
      case '<':
        if (peek(1) == '>') return symbol(Sym::Neq, 2);
        if (peek(1) == '=') return symbol(Sym::Le, 2);
        return symbol(Sym::Lt, 1);
      case '>': return peek(1) == '=' ? symbol(Sym::Ge, 2) : symbol(Sym::Gt, 1);
      case '!':
        if (peek(1) == '=') return symbol(Sym::Neq, 2);
        break;
      default:
        break;
    }
    throw LexError(std::string("illegal character '") + c + "'", pos());
  }

  Token ident_or_keyword() {
    Token t;
    t.pos = pos();
    std::string text;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      text += advance();
    }
    std::string lowered = text;
    for (char& ch : lowered) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    Kw kw = keyword_from(lowered);
    if (kw != Kw::None) {
      t.type = Token::Type::Keyword;
      t.kw = kw;
    } else {
      t.type = Token::Type::Ident;
    }
    t.text = std::move(text);
    return t;
  }

  Token number() {
    Token t;
    t.pos = pos();
    size_t start = i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    bool is_float = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      size_t mark = i_;
      char sign = peek(1);
      if (std::isdigit(static_cast<unsigned char>(sign)) ||
          ((sign == '+' || sign == '-') && std::isdigit(static_cast<unsigned char>(peek(2))))) {
        is_float = true;
        advance();
        if (peek() == '+' || peek() == '-') advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      } else {
        i_ = mark;
      }
    }
    std::string_view text = src_.substr(start, i_ - start);
    if (is_float) {
      t.type = Token::Type::Float;
      double d = 0.0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), d);
      if (res.ec != std::errc()) throw LexError("malformed number", t.pos);
      t.float_value = d;
    } else {
      t.type = Token::Type::Int;
      int64_t v = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec != std::errc()) throw LexError("integer literal out of range", t.pos);
      t.int_value = v;
    }
    t.text = std::string(text);
    return t;
  }

  Token string_literal() {
    Token t;
    t.type = Token::Type::String;
    t.pos = pos();
    advance();  // opening quote
    std::string text;
    for (;;) {
      if (at_end()) throw LexError("unterminated string", t.pos);
      char c = advance();
      if (c == '\'') break;
      if (c == '\\') {
        if (at_end()) throw LexError("unterminated string", t.pos);
        char esc = advance();
        switch (esc) {
          case '\'': text += '\''; break;
          case '\\': text += '\\'; break;
          case 'n': text += '\n'; break;
          case 't': text += '\t'; break;
          case 'r': text += '\r'; break;
          default:
            throw LexError(std::string("unknown escape '\\") + esc + "'", pos());
        }
        continue;
      }
      text += c;
    }
    t.text = std::move(text);
    return t;
  }

  std::string_view src_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view src) { return Lexer(src).run(); }

}  // namespace sqlpp
