#include "guirepair/prompts.hpp"

#include "guirepair/error.hpp"

namespace guirepair {

PromptLibrary::PromptLibrary(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) throw Error(ErrorCode::ConfigError, "prompt directory missing: " + dir_.string());
}

const std::string& PromptLibrary::raw(const std::string& name) const {
  auto it = cache_.find(name);
  if (it != cache_.end()) return it->second;
  try {
    return cache_.emplace(name, read_file(dir_ / (name + ".txt"))).first->second;
  } catch (const Error&) {
    throw Error(ErrorCode::ConfigError, "prompt template '" + name + "' not found in " + dir_.string());
  }
}

std::string PromptLibrary::render(const std::string& name, const std::map<std::string, std::string>& vars) const {
  const std::string& tpl = raw(name);
  std::string out;
  out.reserve(tpl.size());
  std::size_t pos = 0;
  while (true) {
    auto open = tpl.find("{{", pos);
    if (open == std::string::npos) {
      out.append(tpl, pos);
      break;
    }
    auto close = tpl.find("}}", open + 2);
    if (close == std::string::npos) throw Error(ErrorCode::ConfigError, "unterminated placeholder in " + name);
    out.append(tpl, pos, open - pos);
    const std::string key = std::string(trim(std::string_view(tpl).substr(open + 2, close - open - 2)));
    auto it = vars.find(key);
    if (it == vars.end()) throw Error(ErrorCode::ConfigError, "prompt " + name + " needs '" + key + "'");
    out += it->second;
    pos = close + 2;
  }
  return out;
}

}  // namespace guirepair
