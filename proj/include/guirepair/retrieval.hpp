#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guirepair/util.hpp"

namespace guirepair {

class Provider;
struct RepoSnapshot;

struct TokenSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
};

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<TokenSpan> tokenize(std::string_view text) const = 0;
};

/// Maximal runs of non-whitespace.
class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::vector<TokenSpan> tokenize(std::string_view text) const override;
};

const Tokenizer& default_tokenizer();

struct Chunk {
  std::string source_path;
  int ordinal = 0;
  std::string text;  // source slice from the chunk's first token to its last
  int token_count = 0;

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct ScoredChunk {
  Chunk chunk;
  double score = 0.0;
};

struct IndexedChunk {
  Chunk chunk;
  std::vector<float> vector;  // unit length
};

/// Greedy left-to-right split into windows of `chunk_size` tokens advancing by
/// chunk_size - overlap. Requires chunk_size > overlap >= 0.
std::vector<Chunk> chunk_text(const std::string& path, std::string_view text, int chunk_size, int overlap,
                              const Tokenizer& tokenizer = default_tokenizer());

/// True when `path` lies under one of the directory prefixes; no scope means everything.
bool in_scope(std::string_view path, const std::optional<std::vector<std::string>>& scope);

/// Exact cosine ranking (dot products of unit vectors): score descending, ties broken by
/// (source_path, ordinal) ascending, at most k results.
std::vector<ScoredChunk> top_k_similar(std::span<const float> query, std::span<const IndexedChunk> index,
                                       std::size_t k,
                                       const std::optional<std::vector<std::string>>& scope = std::nullopt);

/// JSON-lines cache of chunk vectors keyed by (path, ordinal, content digest).
class EmbeddingCache {
 public:
  static EmbeddingCache load(const fs::path& path);  // missing file -> empty
  void save(const fs::path& path) const;
  std::optional<std::vector<float>> find(const Chunk& chunk) const;
  void put(const Chunk& chunk, std::vector<float> vector);
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::string path;
    int ordinal;
    std::string digest;
    std::vector<float> vector;
  };
  std::vector<Entry> entries_;
};

struct RetrievalOptions {
  int chunk_size = 512;
  int chunk_overlap = 0;
  std::string stage = "embedding";
  EmbeddingCache* cache = nullptr;
};

/// Chunks every in-scope corpus file, embeds chunks and query, ranks, keeps each file's
/// best chunk, and truncates to k files. Throws EmptyScope when nothing is left to search.
std::vector<ScoredChunk> scoped_retrieve(Provider& provider, const std::string& query_text,
                                         const RepoSnapshot& snapshot, std::span<const std::string> corpus,
                                         std::size_t k, const std::optional<std::vector<std::string>>& scope,
                                         const RetrievalOptions& options = {});

}  // namespace guirepair
