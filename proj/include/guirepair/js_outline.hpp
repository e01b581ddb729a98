#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace guirepair::js {

enum class TokenKind { Identifier, Number, String, Template, Regex, Punct, Comment };

struct Token {
  TokenKind kind;
  std::string_view text;
  int line = 1;      // 1-based line of the first character
  int end_line = 1;  // line of the last character
};

/// Tokenizes JavaScript/JSX-ish source. Keywords are Identifiers. Throws ParseFailure on
/// unterminated strings, templates or block comments.
std::vector<Token> lex(std::string_view source);

enum class ElementKind { Function, Class, Method };

struct LineRange {
  int first = 0;
  int last = 0;
  friend bool operator==(const LineRange&, const LineRange&) = default;
};

/// A class, function, or method together with the line spans the views need.
struct Element {
  ElementKind kind = ElementKind::Function;
  std::string name;            // "draw"
  std::string qualified_name;  // "BarChart.draw"
  int start_line = 0;
  int end_line = 0;
  int header_end_line = 0;  // line holding the body's opening brace (end_line when bodiless)
  bool has_body = true;
  bool single_line_body = false;  // body opens and closes on header_end_line
  std::size_t body_open_column = 0;  // byte column just past '{' on header_end_line
  std::vector<LineRange> declarations;  // variable declarations inside the body / class fields
  std::vector<LineRange> comments;      // comments inside the body
  std::vector<Element> members;         // class methods
};

enum class StatementKind { Import, Export, Variable, Element, Other };

struct Statement {
  StatementKind kind = StatementKind::Other;
  LineRange lines;
  std::string name;           // declared name for Variable statements
  int element_index = -1;     // index into Outline::elements for Element statements
};

struct Outline {
  std::vector<Element> elements;      // top level, source order
  std::vector<Statement> statements;  // top level, source order
  std::vector<LineRange> top_comments;
  int line_count = 0;
};

/// Structural outline of a JavaScript module. Throws ParseFailure on unbalanced brackets.
Outline parse_outline(std::string_view source);

/// Extensions handled by the grammar path.
bool supports_path(std::string_view path);

}  // namespace guirepair::js
