#include "guirepair/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

#include "guirepair/error.hpp"
#include "guirepair/provider.hpp"
#include "guirepair/workspace.hpp"

namespace guirepair {

std::vector<TokenSpan> WhitespaceTokenizer::tokenize(std::string_view text) const {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    out.push_back({start, i - start});
  }
  return out;
}

const Tokenizer& default_tokenizer() {
  static const WhitespaceTokenizer tokenizer;
  return tokenizer;
}

std::vector<Chunk> chunk_text(const std::string& path, std::string_view text, int chunk_size, int overlap,
                              const Tokenizer& tokenizer) {
  if (overlap < 0 || chunk_size <= overlap)
    throw Error(ErrorCode::InvalidArgument, "chunking requires chunk_size > overlap >= 0");
  const auto tokens = tokenizer.tokenize(text);
  std::vector<Chunk> chunks;
  const std::size_t size = static_cast<std::size_t>(chunk_size);
  const std::size_t step = static_cast<std::size_t>(chunk_size - overlap);
  for (std::size_t start = 0; start < tokens.size(); start += step) {
    const std::size_t end = std::min(start + size, tokens.size());
    const auto& first = tokens[start];
    const auto& last = tokens[end - 1];
    Chunk c;
    c.source_path = path;
    c.ordinal = static_cast<int>(chunks.size());
    c.text = std::string(text.substr(first.offset, last.offset + last.length - first.offset));
    c.token_count = static_cast<int>(end - start);
    chunks.push_back(std::move(c));
    if (end == tokens.size()) break;
  }
  return chunks;
}

bool in_scope(std::string_view path, const std::optional<std::vector<std::string>>& scope) {
  if (!scope) return true;
  return std::any_of(scope->begin(), scope->end(), [&](const std::string& p) { return path_under(path, p); });
}

std::vector<ScoredChunk> top_k_similar(std::span<const float> query, std::span<const IndexedChunk> index,
                                       std::size_t k, const std::optional<std::vector<std::string>>& scope) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  std::vector<ScoredChunk> scored;
  scored.reserve(index.size());
  for (const auto& entry : index) {
    if (entry.vector.size() != query.size())
      throw Error(ErrorCode::DimensionMismatch, "chunk " + entry.chunk.source_path + "#" +
                                                    std::to_string(entry.chunk.ordinal) + " has dimension " +
                                                    std::to_string(entry.vector.size()) + ", query has " +
                                                    std::to_string(query.size()));
    if (!in_scope(entry.chunk.source_path, scope)) continue;
    double dot = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) dot += static_cast<double>(query[i]) * entry.vector[i];
    scored.push_back({entry.chunk, dot});
  }
  auto better = [](const ScoredChunk& a, const ScoredChunk& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.chunk.source_path != b.chunk.source_path) return a.chunk.source_path < b.chunk.source_path;
    return a.chunk.ordinal < b.chunk.ordinal;
  };
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
  scored.resize(keep);
  return scored;
}

EmbeddingCache EmbeddingCache::load(const fs::path& path) {
  EmbeddingCache cache;
  std::error_code ec;
  if (!fs::exists(path, ec)) return cache;
  const std::string text = read_file(path);
  for (auto line : split_lines(text)) {
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line);
    cache.entries_.push_back({j.at("path").get<std::string>(), j.at("ordinal").get<int>(),
                              j.at("digest").get<std::string>(), j.at("vector").get<std::vector<float>>()});
  }
  return cache;
}

void EmbeddingCache::save(const fs::path& path) const {
  std::string out;
  for (const auto& e : entries_)
    out += nlohmann::json{{"path", e.path}, {"ordinal", e.ordinal}, {"digest", e.digest}, {"vector", e.vector}}.dump() + "\n";
  write_file(path, out);
}

std::optional<std::vector<float>> EmbeddingCache::find(const Chunk& chunk) const {
  const std::string digest = sha256_hex(chunk.text);
  for (const auto& e : entries_)
    if (e.path == chunk.source_path && e.ordinal == chunk.ordinal) {
      if (e.digest == digest) return e.vector;
      return std::nullopt;  // stale entry
    }
  return std::nullopt;
}

void EmbeddingCache::put(const Chunk& chunk, std::vector<float> vector) {
  const std::string digest = sha256_hex(chunk.text);
  for (auto& e : entries_)
    if (e.path == chunk.source_path && e.ordinal == chunk.ordinal) {
      e.digest = digest;
      e.vector = std::move(vector);
      return;
    }
  entries_.push_back({chunk.source_path, chunk.ordinal, digest, std::move(vector)});
}

std::vector<ScoredChunk> scoped_retrieve(Provider& provider, const std::string& query_text,
                                         const RepoSnapshot& snapshot, std::span<const std::string> corpus,
                                         std::size_t k, const std::optional<std::vector<std::string>>& scope,
                                         const RetrievalOptions& options) {
  std::vector<IndexedChunk> index;
  for (const auto& path : corpus) {
    if (!in_scope(path, scope)) continue;
    for (auto& c : chunk_text(path, snapshot.read(path), options.chunk_size, options.chunk_overlap))
      index.push_back({std::move(c), {}});
  }
  if (index.empty()) throw Error(ErrorCode::EmptyScope, "no text to search in the requested scope");
  if (trim(query_text).empty()) throw Error(ErrorCode::InvalidArgument, "empty retrieval query");

  std::vector<std::string> texts;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (options.cache) {
      if (auto v = options.cache->find(index[i].chunk)) {
        index[i].vector = std::move(*v);
        continue;
      }
    }
    pending.push_back(i);
    texts.push_back(index[i].chunk.text);
  }
  texts.push_back(query_text);
  auto vectors = provider.embed_texts(texts, options.stage);
  for (std::size_t j = 0; j < pending.size(); ++j) {
    index[pending[j]].vector = vectors[j];
    if (options.cache) options.cache->put(index[pending[j]].chunk, vectors[j]);
  }
  const auto& query = vectors.back();

  auto ranked = top_k_similar(query, index, index.size());
  std::vector<ScoredChunk> out;
  std::set<std::string> seen;
  for (auto& sc : ranked) {
    if (!seen.insert(sc.chunk.source_path).second) continue;
    out.push_back(std::move(sc));
    if (out.size() == k) break;
  }
  return out;
}

}  // namespace guirepair
