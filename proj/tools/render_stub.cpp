// Render harness stand-in: answers render requests with pre-rendered screenshots chosen by
// matching the scripts the page loads against a rule map.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Rule {
  std::vector<std::string> all;
  std::vector<std::string> none;
  fs::path png;
  std::vector<std::string> console_errors;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Rule> load_rules(const fs::path& map_path) {
  auto j = json::parse(slurp(map_path));
  std::vector<Rule> rules;
  for (const auto& r : j.at("rules")) {
    Rule rule;
    rule.all = r.value("all", std::vector<std::string>{});
    rule.none = r.value("none", std::vector<std::string>{});
    rule.png = map_path.parent_path() / r.at("png").get<std::string>();
    rule.console_errors = r.value("console_errors", std::vector<std::string>{});
    rules.push_back(std::move(rule));
  }
  return rules;
}

json error_reply(const std::string& message) {
  return {{"status", "error"}, {"png", ""}, {"console_errors", json::array()}, {"message", message}};
}

json handle(const std::string& line, const std::vector<Rule>& rules) {
  json req;
  try {
    req = json::parse(line);
  } catch (const json::exception& e) {
    return error_reply(std::string("bad request: ") + e.what());
  }
  fs::path page = req.value("page", "");
  fs::path out = req.value("out", "");
  if (page.empty() || !fs::is_regular_file(page)) return error_reply("page not found: " + page.string());
  if (out.empty()) return error_reply("no output path");

  std::string html = slurp(page);
  std::string loaded = html;
  std::vector<std::string> console_errors;
  static const std::regex src_attr(R"re(<script[^>]*\bsrc="([^"]+)")re");
  for (std::sregex_iterator it(html.begin(), html.end(), src_attr), end; it != end; ++it) {
    auto script = page.parent_path() / (*it)[1].str();
    if (fs::is_regular_file(script)) {
      loaded += "\n" + slurp(script);
    } else {
      console_errors.push_back("Failed to load resource: " + (*it)[1].str());
    }
  }
  for (const auto& rule : rules) {
    bool ok = true;
    for (const auto& s : rule.all) ok = ok && loaded.find(s) != std::string::npos;
    for (const auto& s : rule.none) ok = ok && loaded.find(s) == std::string::npos;
    if (!ok) continue;
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
    fs::copy_file(rule.png, out, fs::copy_options::overwrite_existing, ec);
    if (ec) return error_reply("cannot write " + out.string() + ": " + ec.message());
    console_errors.insert(console_errors.end(), rule.console_errors.begin(), rule.console_errors.end());
    return {{"status", "ok"}, {"png", out.string()}, {"console_errors", console_errors}, {"message", nullptr}};
  }
  return error_reply("no pre-rendered capture matches " + page.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Render harness stub"};
  std::string map_path;
  bool serve = false;
  app.add_option("--map", map_path, "Rule map (JSON)")->required()->check(CLI::ExistingFile);
  app.add_flag("--serve", serve, "Answer requests until end of input");
  CLI11_PARSE(app, argc, argv);

  std::vector<Rule> rules;
  try {
    rules = load_rules(map_path);
  } catch (const std::exception& e) {
    std::cerr << "render_stub: " << e.what() << "\n";
    return 2;
  }
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    std::cout << handle(line, rules).dump() << "\n" << std::flush;
    if (!serve) break;
  }
  return 0;
}
