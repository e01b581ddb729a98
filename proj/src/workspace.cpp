#include "guirepair/workspace.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "guirepair/error.hpp"
#include "guirepair/http.hpp"
#include "guirepair/image.hpp"

namespace guirepair {

using nlohmann::json;

ImageFetcher default_image_fetcher() {
  return [](const std::string& url) {
    auto res = http::get(url);
    if (res.status != 200)
      throw Error(ErrorCode::UnreadableImage,
                  "fetch " + url + " failed: " + (res.status ? std::to_string(res.status) : res.error));
    return res.body;
  };
}

std::optional<std::string> extract_tagged_repro(std::string_view body) {
  for (const auto& block : fenced_blocks(body)) {
    std::string info = to_lower(block.info);
    for (char& c : info)
      if (c == ',' || c == '{' || c == '}' || c == '=') c = ' ';
    std::size_t pos = 0;
    while (pos < info.size()) {
      auto end = info.find(' ', pos);
      if (end == std::string::npos) end = info.size();
      std::string tag = info.substr(pos, end - pos);
      if (tag == "repro" || tag == "reproduction") return block.body;
      pos = end + 1;
    }
  }
  return std::nullopt;
}

namespace {

bool is_url(std::string_view s) { return s.starts_with("http://") || s.starts_with("https://"); }

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw Error(ErrorCode::MissingField, std::string("issue record lacks '") + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

IssueReport load_issue_report(const fs::path& path, const ImageFetcher& fetch) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "issue record " + path.string() + " is not JSON: " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "issue record must be a JSON object");

  IssueReport issue;
  issue.instance_id = required_string(j, "instance_id");
  if (issue.instance_id.empty()) throw Error(ErrorCode::MissingField, "instance_id is empty");
  issue.title = required_string(j, "title");
  issue.body_text = required_string(j, "body");

  if (j.contains("images") && !j["images"].is_null()) {
    if (!j["images"].is_array()) throw Error(ErrorCode::MissingField, "'images' must be an array");
    const fs::path base = path.parent_path();
    for (const auto& entry : j["images"]) {
      ImageRef img;
      img.id = required_string(entry, "id");
      img.source = required_string(entry, "source");
      if (is_url(img.source)) {
        img.payload = fetch(img.source);
      } else {
        try {
          img.payload = read_file(base / img.source);
        } catch (const Error&) {
          throw Error(ErrorCode::UnreadableImage, "image '" + img.id + "' not readable at " + img.source);
        }
      }
      ImageInfo info = probe_image(img.payload);
      img.media_type = info.media_type;
      img.width = info.width;
      img.height = info.height;
      issue.images.push_back(std::move(img));
    }
  }

  if (j.contains("repro_code") && j["repro_code"].is_string()) {
    issue.repro_code = j["repro_code"].get<std::string>();
  } else {
    issue.repro_code = extract_tagged_repro(issue.body_text);
  }
  return issue;
}

bool RepoSnapshot::contains(std::string_view rel) const {
  return std::binary_search(file_index.begin(), file_index.end(), rel);
}

std::string RepoSnapshot::read(std::string_view rel) const {
  if (!contains(rel)) throw Error(ErrorCode::UnknownFile, "not a text file of the snapshot: " + std::string(rel));
  return read_file(root / std::string(rel));
}

std::vector<std::string> RepoSnapshot::doc_files() const {
  std::vector<std::string> out;
  if (!doc_root) return out;
  for (const auto& p : file_index)
    if (path_under(p, *doc_root)) out.push_back(p);
  return out;
}

std::vector<std::string> RepoSnapshot::code_files() const {
  std::vector<std::string> out;
  for (const auto& p : file_index) {
    if (doc_root && path_under(p, *doc_root)) continue;
    if (is_code_path(p)) out.push_back(p);
  }
  return out;
}

bool is_code_path(std::string_view rel) {
  static const std::set<std::string, std::less<>> kCodeExt = {
      ".js", ".jsx", ".mjs", ".cjs", ".ts", ".tsx", ".vue", ".svelte", ".css", ".scss", ".less", ".json", ".html"};
  return kCodeExt.contains(file_extension(rel));
}

bool looks_binary(std::string_view head) {
  return head.substr(0, 8192).find('\0') != std::string_view::npos;
}

RepoSnapshot snapshot_repository(const fs::path& root, std::span<const std::string> doc_dir_candidates) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::NotADirectory, root.string() + " is not a directory");

  RepoSnapshot snap;
  snap.root = fs::absolute(root);
  auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    const auto& entry = *it;
    std::string name = entry.path().filename().string();
    if (entry.is_directory() && (name == ".git" || name == "node_modules")) {
      it.disable_recursion_pending();
      continue;
    }
    // Symlinks are not followed.
    if (entry.is_symlink() || !entry.is_regular_file()) continue;
    std::string rel = normalize_relative_path(fs::relative(entry.path(), root).generic_string());
    if (rel.empty()) continue;
    std::string head(8192, '\0');
    {
      std::ifstream in(entry.path(), std::ios::binary);
      in.read(head.data(), static_cast<std::streamsize>(head.size()));
      head.resize(static_cast<std::size_t>(in.gcount()));
    }
    (looks_binary(head) ? snap.binary_files : snap.file_index).push_back(rel);
  }
  std::sort(snap.file_index.begin(), snap.file_index.end());
  std::sort(snap.binary_files.begin(), snap.binary_files.end());
  if (snap.file_index.empty()) throw Error(ErrorCode::EmptyRepository, root.string() + " has no text files");

  for (const auto& cand : doc_dir_candidates) {
    if (fs::is_directory(root / cand, ec)) {
      snap.doc_root = normalize_relative_path(cand);
      break;
    }
  }
  return snap;
}

namespace {

struct TreeNode {
  std::map<std::string, TreeNode> dirs;
  std::set<std::string> files;
};

void render_node(const TreeNode& node, int depth, std::string& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 4, ' ');
  for (const auto& [name, child] : node.dirs) {
    out += indent + name + "/\n";
    render_node(child, depth + 1, out);
  }
  for (const auto& f : node.files) out += indent + f + "\n";
}

}  // namespace

std::string render_path_tree(std::span<const std::string> paths) {
  TreeNode root;
  for (const auto& p : paths) {
    TreeNode* node = &root;
    std::size_t start = 0;
    while (true) {
      auto slash = p.find('/', start);
      if (slash == std::string::npos) {
        node->files.insert(p.substr(start));
        break;
      }
      node = &node->dirs[p.substr(start, slash - start)];
      start = slash + 1;
    }
  }
  std::string out;
  render_node(root, 0, out);
  return out;
}

std::string doc_tree(const RepoSnapshot& snapshot) {
  if (!snapshot.doc_root) throw Error(ErrorCode::NoDocumentation, "repository has no documentation directory");
  auto docs = snapshot.doc_files();
  if (docs.empty()) throw Error(ErrorCode::NoDocumentation, "documentation directory " + *snapshot.doc_root + " is empty");
  return render_path_tree(docs);
}

}  // namespace guirepair
