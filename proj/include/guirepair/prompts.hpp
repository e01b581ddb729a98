#pragma once

#include <map>
#include <string>

#include "guirepair/util.hpp"

namespace guirepair {

/// Versioned prompt templates read from a directory of `<name>.txt` files.
/// Placeholders are written `{{key}}`; every placeholder must be bound when rendering.
class PromptLibrary {
 public:
  explicit PromptLibrary(fs::path dir);

  const std::string& raw(const std::string& name) const;
  std::string render(const std::string& name, const std::map<std::string, std::string>& vars) const;

 private:
  fs::path dir_;
  mutable std::map<std::string, std::string> cache_;
};

}  // namespace guirepair
