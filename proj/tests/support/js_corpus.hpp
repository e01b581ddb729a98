#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace guirepair::testing {

/// Ground truth for one class, function or method of a generated file.
struct GeneratedElement {
  std::string qualified_name;  // "Class.method" for methods
  int start_line = 0;          // first header line
  int end_line = 0;            // closing brace line
  std::vector<std::string> header_lines;
};

struct GeneratedFile {
  std::string path;
  std::string text;
  std::vector<std::string> import_lines;
  std::vector<std::string> body_declarations;  // statement-level declarations inside bodies
  std::vector<GeneratedElement> elements;
  int line_count = 0;
};

/// Builds a syntactically valid JavaScript module with random imports, functions (some with
/// multi-line headers), arrow-function constants, classes with methods, comments and top-level code.
GeneratedFile generate_js_file(std::mt19937_64& rng, int index);

}  // namespace guirepair::testing
