#include "guirepair/js_outline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <unordered_set>

#include "guirepair/error.hpp"
#include "guirepair/util.hpp"

namespace guirepair::js {
namespace {

bool is_ident_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == '$' || c == '#' || u >= 0x80;
}

bool is_ident_part(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '$' || u >= 0x80;
}

const std::unordered_set<std::string_view>& regex_keywords() {
  static const std::unordered_set<std::string_view> k{
      "return", "typeof", "instanceof", "in",   "of",    "new",  "delete",
      "void",   "throw",  "case",       "do",   "else",  "yield", "await"};
  return k;
}

// Keywords whose parenthesized head is followed by a statement, not an operand.
const std::unordered_set<std::string_view>& paren_keywords() {
  static const std::unordered_set<std::string_view> k{"if", "while", "for", "with"};
  return k;
}

// Longest-first punctuator table.
constexpr std::array<std::string_view, 52> kPuncts{
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "\?\?=",
    "=>",   "==",  "!=",  "<=",  ">=",  "&&",  "||",  "??",  "?.",  "++",  "--",
    "+=",   "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",  "<<",  ">>",  "**",
    "{",    "}",   "(",   ")",   "[",   "]",   ";",   ",",   "<",   ">",   "+",
    "-",    "*",   "%",   "&",   "|",   "^",   "!",   "~"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        continue;
      }
      std::size_t start = pos_;
      int start_line = line_;
      TokenKind kind;
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        kind = TokenKind::Comment;
      } else if (c == '/' && peek(1) == '*') {
        auto end = src_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated block comment", start_line);
        advance_to(end + 2);
        kind = TokenKind::Comment;
      } else if (c == '"' || c == '\'') {
        scan_string(c);
        kind = TokenKind::String;
      } else if (c == '`') {
        ++pos_;
        scan_template_rest();
        kind = TokenKind::Template;
      } else if (is_ident_start(c)) {
        ++pos_;
        while (pos_ < src_.size() && is_ident_part(src_[pos_])) ++pos_;
        kind = TokenKind::Identifier;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        ++pos_;
        while (pos_ < src_.size() &&
               (is_ident_part(src_[pos_]) || src_[pos_] == '.' ||
                ((src_[pos_] == '+' || src_[pos_] == '-') &&
                 (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))))
          ++pos_;
        kind = TokenKind::Number;
      } else if (c == '/' && regex_allowed() && scan_regex()) {
        kind = TokenKind::Regex;
      } else {
        kind = TokenKind::Punct;
        std::size_t len = 1;
        for (auto p : kPuncts) {
          if (src_.substr(pos_, p.size()) == p) {
            len = p.size();
            break;
          }
        }
        pos_ += len;
        if (len == 1 && c == '(') {
          bool keyword = last_ && tokens_[*last_].kind == TokenKind::Identifier &&
                         paren_keywords().contains(tokens_[*last_].text);
          paren_keyword_.push_back(keyword);
        } else if (len == 1 && c == ')') {
          close_paren_keyword_ = !paren_keyword_.empty() && paren_keyword_.back();
          if (!paren_keyword_.empty()) paren_keyword_.pop_back();
        }
      }
      tokens_.push_back(Token{kind, src_.substr(start, pos_ - start), start_line, line_});
      if (kind != TokenKind::Comment) last_ = tokens_.size() - 1;
    }
    return std::move(tokens_);
  }

 private:
  [[noreturn]] void fail(const std::string& what, int line) const {
    throw Error(ErrorCode::ParseFailure, what + " at line " + std::to_string(line));
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance_to(std::size_t end) {
    for (; pos_ < end; ++pos_) {
      if (src_[pos_] == '\n') ++line_;
    }
  }

  void scan_string(char quote) {
    int start_line = line_;
    ++pos_;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated string", start_line);
      char c = src_[pos_];
      if (c == '\\') {
        if (peek(1) == '\n') ++line_;
        pos_ += 2;
        continue;
      }
      if (c == '\n') fail("unterminated string", start_line);
      ++pos_;
      if (c == quote) return;
    }
  }

  // Positioned just after an opening backtick or a closing '}' of a substitution.
  void scan_template_rest() {
    int start_line = line_;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated template literal", start_line);
      char c = src_[pos_];
      if (c == '\\') {
        if (peek(1) == '\n') ++line_;
        pos_ += 2;
        continue;
      }
      if (c == '\n') ++line_;
      if (c == '`') {
        ++pos_;
        return;
      }
      if (c == '$' && peek(1) == '{') {
        pos_ += 2;
        skip_substitution();
        continue;
      }
      ++pos_;
    }
  }

  // Skips a ${ ... } expression including nested braces, strings, templates and comments.
  void skip_substitution() {
    int start_line = line_;
    int depth = 1;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated template substitution", start_line);
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == '"' || c == '\'') {
        scan_string(c);
      } else if (c == '`') {
        ++pos_;
        scan_template_rest();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        auto end = src_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated block comment", line_);
        advance_to(end + 2);
      } else if (c == '{') {
        ++depth;
        ++pos_;
      } else if (c == '}') {
        ++pos_;
        if (--depth == 0) return;
      } else {
        ++pos_;
      }
    }
  }

  bool regex_allowed() const {
    if (!last_) return true;
    const Token& t = tokens_[*last_];
    switch (t.kind) {
      case TokenKind::Number:
      case TokenKind::String:
      case TokenKind::Template:
      case TokenKind::Regex:
        return false;
      case TokenKind::Identifier:
        return regex_keywords().contains(t.text);
      case TokenKind::Punct:
        if (t.text == ")") return close_paren_keyword_;  // `if (x) /re/`
        return t.text != "]";
      case TokenKind::Comment:
        return true;
    }
    return true;
  }

  // Attempts to scan a regular expression literal; leaves pos_ untouched on failure.
  bool scan_regex() {
    std::size_t p = pos_ + 1;
    bool in_class = false;
    while (p < src_.size()) {
      char c = src_[p];
      if (c == '\n') return false;
      if (c == '\\') {
        p += 2;
        continue;
      }
      if (c == '[') in_class = true;
      else if (c == ']') in_class = false;
      else if (c == '/' && !in_class) {
        ++p;
        while (p < src_.size() && is_ident_part(src_[p])) ++p;
        pos_ = p;
        return true;
      }
      ++p;
    }
    return false;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<Token> tokens_;
  std::optional<std::size_t> last_;
  std::vector<bool> paren_keyword_;  // per open paren: opened after if/while/for/with
  bool close_paren_keyword_ = false;
};

bool is_open(std::string_view t) { return t == "{" || t == "(" || t == "["; }
bool is_close(std::string_view t) { return t == "}" || t == ")" || t == "]"; }

// Tokens after which a newline does not end a statement.
bool continues_after(const Token& t) {
  static const std::unordered_set<std::string_view> words{
      "typeof", "instanceof", "in", "of", "new", "delete", "void", "throw",
      "case", "yield", "await", "extends"};
  if (t.kind == TokenKind::Identifier) return words.contains(t.text);
  if (t.kind != TokenKind::Punct) return false;
  static const std::unordered_set<std::string_view> no{")", "]", "}", "++", "--", ";"};
  return !no.contains(t.text);
}

// Tokens before which a newline does not end a statement.
bool continues_before(const Token& t) {
  if (t.kind == TokenKind::Identifier) {
    return t.text == "else" || t.text == "catch" || t.text == "finally" ||
           t.text == "instanceof" || t.text == "in" || t.text == "of";
  }
  if (t.kind != TokenKind::Punct) return false;
  static const std::unordered_set<std::string_view> yes{
      ".", "?.", ",", "?", ":", ")", "]", "}", "=", "==", "===", "!=", "!==", "+", "-",
      "*", "/", "%", "**", "&&", "||", "??", "&", "|", "^", "<", ">", "<=", ">=", "=>",
      "<<", ">>", ">>>", "+=", "-=", "*=", "/=", "%=", "&&=", "||=", "\?\?="};
  return yes.contains(t.text);
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {
    for (const auto& t : lex(src)) {
      if (t.kind == TokenKind::Comment) {
        comments_.push_back(t);
      } else {
        toks_.push_back(t);
      }
    }
    match_.assign(toks_.size(), -1);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      const auto& t = toks_[i];
      if (t.kind != TokenKind::Punct) continue;
      if (is_open(t.text)) {
        stack.push_back(i);
      } else if (is_close(t.text)) {
        if (stack.empty()) fail("unbalanced '" + std::string(t.text) + "'", t.line);
        auto open = stack.back();
        stack.pop_back();
        auto o = toks_[open].text;
        if ((o == "{" && t.text != "}") || (o == "(" && t.text != ")") ||
            (o == "[" && t.text != "]"))
          fail("mismatched '" + std::string(t.text) + "'", t.line);
        match_[open] = static_cast<long>(i);
        match_[i] = static_cast<long>(open);
      }
    }
    if (!stack.empty()) fail("unclosed '" + std::string(toks_[stack.back()].text) + "'",
                             toks_[stack.back()].line);
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  Outline run() {
    Outline out;
    out.line_count = static_cast<int>(split_lines(src_).size());
    std::size_t i = 0;
    while (i < toks_.size()) {
      if (is_punct(i, ";")) {
        ++i;
        continue;
      }
      i = top_statement(i, out) + 1;
    }
    // Top-level comments: those not inside any element or statement span.
    for (const auto& c : comments_) {
      bool inside = false;
      for (const auto& s : out.statements) {
        if (c.line > s.lines.first && c.end_line < s.lines.last) {
          inside = true;
          break;
        }
        if (s.kind == StatementKind::Element && c.line >= s.lines.first &&
            c.end_line <= s.lines.last && c.line > out.elements[s.element_index].header_end_line)
          inside = true;
      }
      if (!inside) out.top_comments.push_back({c.line, c.end_line});
    }
    return out;
  }

 private:
  [[noreturn]] static void fail(const std::string& what, int line) {
    throw Error(ErrorCode::ParseFailure, what + " at line " + std::to_string(line));
  }

  bool is_punct(std::size_t i, std::string_view p) const {
    return i < toks_.size() && toks_[i].kind == TokenKind::Punct && toks_[i].text == p;
  }
  bool is_word(std::size_t i, std::string_view w) const {
    return i < toks_.size() && toks_[i].kind == TokenKind::Identifier && toks_[i].text == w;
  }
  bool is_ident(std::size_t i) const {
    return i < toks_.size() && toks_[i].kind == TokenKind::Identifier;
  }
  std::size_t matching(std::size_t i) const { return static_cast<std::size_t>(match_[i]); }

  // Index of the last token of the statement beginning at i, bounded by `limit` (exclusive).
  std::size_t statement_end(std::size_t i, std::size_t limit) const {
    std::size_t k = i;
    while (k < limit) {
      const auto& t = toks_[k];
      if (t.kind == TokenKind::Punct) {
        if (t.text == ";") return k;
        if (is_close(t.text)) return k - 1;  // enclosing block closes
        if (is_open(t.text)) k = matching(k);
      }
      std::size_t next = k + 1;
      if (next >= limit) return k;
      const auto& n = toks_[next];
      if (n.line > toks_[k].end_line && !continues_after(toks_[k]) && !continues_before(n)) {
        // A block-bodied construct followed by '(' or '[' on a new line still ends here.
        return k;
      }
      k = next;
    }
    return limit - 1;
  }

  // Column in the line just past the '{' token at index i.
  std::size_t column_after(std::size_t i) const {
    const auto& t = toks_[i];
    auto offset = static_cast<std::size_t>(t.text.data() - src_.data());
    return offset + 1 - line_starts_[static_cast<std::size_t>(t.line - 1)];
  }

  // Parses `function` (at i, possibly preceded by async) through its body. Returns index of '}'.
  std::optional<std::size_t> function_body_open(std::size_t i, std::size_t limit) const {
    std::size_t k = i;
    if (is_word(k, "async")) ++k;
    if (!is_word(k, "function")) return std::nullopt;
    ++k;
    if (is_punct(k, "*")) ++k;
    if (is_ident(k) && !is_punct(k, "(")) ++k;
    if (!is_punct(k, "(")) return std::nullopt;
    k = matching(k) + 1;
    if (k < limit && is_punct(k, "{")) return k;
    return std::nullopt;
  }

  // Arrow function starting at i: `async? (params) =>` or `async? ident =>`. Returns index
  // of the token after `=>`.
  std::optional<std::size_t> arrow_after(std::size_t i, std::size_t limit) const {
    std::size_t k = i;
    if (is_word(k, "async") && !is_punct(k + 1, "=>")) ++k;
    if (is_punct(k, "(")) {
      k = matching(k) + 1;
    } else if (is_ident(k)) {
      ++k;
    } else {
      return std::nullopt;
    }
    if (k < limit && is_punct(k, "=>")) return k + 1;
    return std::nullopt;
  }

  Element make_element(ElementKind kind, std::string name, std::string qualified,
                       std::size_t first_tok, std::optional<std::size_t> body_open,
                       std::size_t last_tok) const {
    Element e;
    e.kind = kind;
    e.name = std::move(name);
    e.qualified_name = std::move(qualified);
    e.start_line = toks_[first_tok].line;
    e.end_line = toks_[last_tok].end_line;
    if (body_open) {
      e.has_body = true;
      e.header_end_line = toks_[*body_open].line;
      e.body_open_column = column_after(*body_open);
      auto close = matching(*body_open);
      e.single_line_body = toks_[close].line == e.header_end_line;
      collect_body(*body_open, close, e);
    } else {
      e.has_body = false;
      e.header_end_line = e.end_line;
    }
    return e;
  }

  // Variable declarations and comments strictly inside a function body.
  void collect_body(std::size_t open, std::size_t close, Element& e) const {
    for (std::size_t k = open + 1; k < close; ++k) {
      if (!(is_word(k, "const") || is_word(k, "let") || is_word(k, "var"))) continue;
      const auto& prev = toks_[k - 1];
      bool at_statement_start =
          (prev.kind == TokenKind::Punct &&
           (prev.text == ";" || prev.text == "{" || prev.text == "}")) ||
          (prev.end_line < toks_[k].line && !continues_after(prev) &&
           !(prev.kind == TokenKind::Punct && prev.text == "("));
      if (!at_statement_start || !is_ident_or_pattern(k + 1)) continue;
      std::size_t end = statement_end(k, close);
      e.declarations.push_back({toks_[k].line, toks_[end].end_line});
    }
    int first = toks_[open].line;
    int last = toks_[close].line;
    for (const auto& c : comments_) {
      if (c.line >= first && c.end_line <= last && comment_within(c, open, close))
        e.comments.push_back({c.line, c.end_line});
    }
  }

  bool is_ident_or_pattern(std::size_t k) const {
    return is_ident(k) || is_punct(k, "{") || is_punct(k, "[");
  }

  bool comment_within(const Token& c, std::size_t open, std::size_t close) const {
    return c.text.data() > toks_[open].text.data() && c.text.data() < toks_[close].text.data();
  }

  // Class at index of `class`; returns the element and index of closing '}'.
  std::pair<Element, std::size_t> parse_class(std::size_t first_tok, std::size_t class_tok,
                                              std::string name, std::size_t limit) const {
    std::size_t k = class_tok + 1;
    if (is_ident(k) && !is_word(k, "extends")) {
      if (name.empty()) name = std::string(toks_[k].text);
      ++k;
    }
    while (k < limit && !is_punct(k, "{")) {
      if (is_punct(k, "(") || is_punct(k, "[")) k = matching(k);
      ++k;
    }
    if (k >= limit) fail("class without body", toks_[class_tok].line);
    std::size_t open = k;
    std::size_t close = matching(open);
    Element e;
    e.kind = ElementKind::Class;
    e.name = name;
    e.qualified_name = name;
    e.start_line = toks_[first_tok].line;
    e.end_line = toks_[close].end_line;
    e.header_end_line = toks_[open].line;
    e.body_open_column = column_after(open);
    e.single_line_body = toks_[close].line == e.header_end_line;
    parse_class_body(open, close, e);
    return {std::move(e), close};
  }

  void parse_class_body(std::size_t open, std::size_t close, Element& cls) const {
    std::size_t k = open + 1;
    std::vector<std::pair<std::size_t, std::size_t>> member_spans;
    while (k < close) {
      if (is_punct(k, ";")) {
        ++k;
        continue;
      }
      std::size_t first = k;
      while (is_punct(k, "@")) {
        ++k;
        while (is_ident(k) || is_punct(k, ".")) ++k;
        if (is_punct(k, "(")) k = matching(k) + 1;
      }
      if (is_word(k, "static") && is_punct(k + 1, "{")) {
        k = matching(k + 1) + 1;
        continue;
      }
      auto modifier = [&](std::size_t j) {
        return (is_word(j, "static") || is_word(j, "async") || is_word(j, "get") ||
                is_word(j, "set") || is_word(j, "accessor")) &&
               !is_punct(j + 1, "(") && !is_punct(j + 1, "=") && !is_punct(j + 1, ";");
      };
      while (modifier(k)) ++k;
      if (is_punct(k, "*")) ++k;
      std::string name;
      if (is_punct(k, "[")) {
        auto end = matching(k);
        name = "[computed]";
        k = end + 1;
      } else {
        name = std::string(toks_[k].text);
        if (toks_[k].kind == TokenKind::String) name = name.substr(1, name.size() - 2);
        ++k;
      }
      if (is_punct(k, "(")) {
        std::size_t after = matching(k) + 1;
        if (!is_punct(after, "{")) {
          k = after;
          continue;
        }
        auto body_close = matching(after);
        cls.members.push_back(make_element(ElementKind::Method, name,
                                           qualify(cls.name, name), first, after, body_close));
        k = body_close + 1;
        continue;
      }
      if (is_punct(k, "=")) {
        std::size_t value = k + 1;
        std::optional<std::size_t> body;
        if (auto f = function_body_open(value, close)) {
          body = f;
        } else if (auto a = arrow_after(value, close); a && is_punct(*a, "{")) {
          body = *a;
        }
        if (body) {
          auto body_close = matching(*body);
          std::size_t last = body_close;
          if (is_punct(last + 1, ";")) ++last;
          cls.members.push_back(make_element(ElementKind::Method, name,
                                             qualify(cls.name, name), first, body, last));
          k = last + 1;
          continue;
        }
      }
      std::size_t end = statement_end(first, close);
      cls.declarations.push_back({toks_[first].line, toks_[end].end_line});
      k = end + 1;
    }
    for (const auto& c : comments_) {
      if (!comment_within(c, open, close)) continue;
      bool in_member = false;
      for (const auto& m : cls.members) {
        if (c.line > m.header_end_line && c.end_line <= m.end_line) in_member = true;
      }
      if (!in_member) cls.comments.push_back({c.line, c.end_line});
    }
  }

  static std::string qualify(const std::string& owner, const std::string& name) {
    return owner.empty() ? name : owner + "." + name;
  }

  std::size_t add_element(Outline& out, Element e, std::size_t first_tok,
                          std::size_t last_tok) const {
    Statement s;
    s.kind = StatementKind::Element;
    s.lines = {toks_[first_tok].line, toks_[last_tok].end_line};
    s.name = e.qualified_name;
    s.element_index = static_cast<int>(out.elements.size());
    out.elements.push_back(std::move(e));
    out.statements.push_back(std::move(s));
    return last_tok;
  }

  std::size_t top_statement(std::size_t i, Outline& out) const {
    const std::size_t limit = toks_.size();
    std::size_t k = i;
    bool exported = false;
    if (is_word(k, "export")) {
      exported = true;
      ++k;
      if (is_punct(k, "{") || is_punct(k, "*")) {
        return push_simple(out, StatementKind::Export, i, statement_end(i, limit));
      }
      if (is_word(k, "default")) ++k;
    }
    if (is_word(k, "import") && !is_punct(k + 1, "(") && !is_punct(k + 1, ".")) {
      return push_simple(out, StatementKind::Import, i, statement_end(i, limit));
    }
    if (auto open = function_body_open(k, limit)) {
      std::size_t name_tok = k + (is_word(k, "async") ? 2 : 1);
      if (is_punct(name_tok, "*")) ++name_tok;
      std::string name = is_ident(name_tok) ? std::string(toks_[name_tok].text) : "default";
      auto close = matching(*open);
      return add_element(out, make_element(ElementKind::Function, name, name, i, open, close),
                         i, close);
    }
    if (is_word(k, "class")) {
      auto [e, close] = parse_class(i, k, "", limit);
      if (e.name.empty()) e.name = e.qualified_name = "default";
      return add_element(out, std::move(e), i, close);
    }
    if (is_word(k, "const") || is_word(k, "let") || is_word(k, "var")) {
      std::size_t name_tok = k + 1;
      if (is_ident(name_tok) && is_punct(name_tok + 1, "=")) {
        std::string name(toks_[name_tok].text);
        std::size_t value = name_tok + 2;
        if (auto e = value_element(i, value, name, limit, out)) return *e;
      }
      Statement s;
      s.kind = StatementKind::Variable;
      s.name = is_ident(name_tok) ? std::string(toks_[name_tok].text) : "";
      auto end = statement_end(i, limit);
      s.lines = {toks_[i].line, toks_[end].end_line};
      out.statements.push_back(std::move(s));
      return end;
    }
    if (exported && is_ident(k) && !is_punct(k + 1, "(")) {
      return push_simple(out, StatementKind::Export, i, statement_end(i, limit));
    }
    // `a.b.c = function () {}` style assignments.
    if (is_ident(k)) {
      std::size_t j = k;
      std::string chain(toks_[j].text);
      ++j;
      while (is_punct(j, ".") && is_ident(j + 1)) {
        chain += ".";
        chain += toks_[j + 1].text;
        j += 2;
      }
      if (is_punct(j, "=")) {
        std::string name = chain.substr(chain.rfind('.') == std::string::npos
                                            ? 0
                                            : chain.rfind('.') + 1);
        if (auto e = value_element(i, j + 1, chain, limit, out, name)) return *e;
      }
    }
    return push_simple(out, StatementKind::Other, i, statement_end(i, limit));
  }

  // Function/class-valued initializer at `value`; registers an element spanning the statement.
  std::optional<std::size_t> value_element(std::size_t first, std::size_t value,
                                           const std::string& qualified, std::size_t limit,
                                           Outline& out, std::string name = {}) const {
    if (name.empty()) name = qualified;
    std::optional<std::size_t> body;
    bool arrow_expr = false;
    if (auto f = function_body_open(value, limit)) {
      body = f;
    } else if (is_word(value, "class")) {
      auto [e, close] = parse_class(first, value, qualified, limit);
      e.name = name;
      e.qualified_name = qualified;
      std::size_t last = is_punct(close + 1, ";") ? close + 1 : close;
      e.end_line = toks_[last].end_line;
      return add_element(out, std::move(e), first, last);
    } else if (auto a = arrow_after(value, limit)) {
      if (is_punct(*a, "{")) body = *a;
      else arrow_expr = true;
    }
    if (!body && !arrow_expr) return std::nullopt;
    std::size_t last;
    if (body) {
      last = matching(*body);
      if (is_punct(last + 1, ";")) ++last;
      else if (!is_punct(last + 1, ",") && last + 1 < limit &&
               toks_[last + 1].line == toks_[last].line)
        last = statement_end(first, limit);
    } else {
      last = statement_end(first, limit);
    }
    Element e = make_element(ElementKind::Function, name, qualified, first, body, last);
    return add_element(out, std::move(e), first, last);
  }

  std::size_t push_simple(Outline& out, StatementKind kind, std::size_t first,
                          std::size_t last) const {
    Statement s;
    s.kind = kind;
    s.lines = {toks_[first].line, toks_[last].end_line};
    out.statements.push_back(std::move(s));
    return last;
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::vector<Token> comments_;
  std::vector<long> match_;
  std::vector<std::size_t> line_starts_;
};

}  // namespace

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

Outline parse_outline(std::string_view source) { return Parser(source).run(); }

bool supports_path(std::string_view path) {
  auto ext = file_extension(path);
  return ext == ".js" || ext == ".jsx" || ext == ".mjs" || ext == ".cjs";
}

}  // namespace guirepair::js
