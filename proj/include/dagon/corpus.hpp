#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dagon/error.hpp"
#include "dagon/io.hpp"
#include "dagon/text.hpp"

namespace dagon {

struct Post {
  std::string post_id;
  std::string thread_id;
  std::string user_id;
  std::optional<std::string> timestamp;  // ISO-8601, kept verbatim
  std::string text;
};

// Ordered collection of posts with unique ids. Iteration follows insertion order.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t doc_count() const { return posts_.size(); }
  bool empty() const { return posts_.empty(); }
  const std::vector<Post>& posts() const { return posts_; }
  const Post& operator[](std::size_t i) const { return posts_[i]; }

  // Returns false (and leaves the corpus unchanged) for a duplicate id or blank text.
  bool add(Post post) {
    if (text::trim(post.text).empty()) return false;
    if (by_id_.count(post.post_id)) return false;
    by_id_.emplace(post.post_id, posts_.size());
    posts_.push_back(std::move(post));
    return true;
  }

  std::optional<std::size_t> position_of(std::string_view post_id) const {
    auto it = by_id_.find(std::string(post_id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::string name_;
  std::vector<Post> posts_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

enum class CorpusFormat { JsonLines, TextDirectory };

inline CorpusFormat detect_format(const std::filesystem::path& path) {
  return std::filesystem::is_directory(path) ? CorpusFormat::TextDirectory : CorpusFormat::JsonLines;
}

struct IngestResult {
  Corpus corpus;
  std::size_t skipped = 0;
};

namespace detail {

inline bool valid_timestamp(const std::string& ts) {
  static const std::regex iso(
      R"(^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}(:?\d{2})?)?)?$)");
  return std::regex_match(ts, iso);
}

inline std::optional<std::string> json_string_field(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (it->is_number_unsigned()) return std::to_string(it->get<unsigned long long>());
  throw FormatError(std::string("field '") + key + "' has unsupported type");
}

inline std::optional<Post> parse_jsonl_record(std::string_view line) {
  try {
    auto obj = nlohmann::json::parse(line);
    if (!obj.is_object()) return std::nullopt;
    auto id = json_string_field(obj, "id");
    auto body = obj.find("text");
    if (!id || id->empty() || body == obj.end() || !body->is_string()) return std::nullopt;
    Post post;
    post.post_id = *id;
    post.thread_id = json_string_field(obj, "thread_id").value_or("");
    post.user_id = json_string_field(obj, "user_id").value_or("");
    post.timestamp = json_string_field(obj, "timestamp");
    if (post.timestamp && !valid_timestamp(*post.timestamp)) return std::nullopt;
    post.text = body->get<std::string>();
    return post;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  } catch (const FormatError&) {
    return std::nullopt;
  }
}

inline void check_malformed_ratio(std::size_t total, std::size_t skipped, const std::filesystem::path& path) {
  if (total > 0 && skipped * 2 > total) {
    throw FormatError("more than half of the records in " + path.string() +
                      " are malformed; wrong corpus format?");
  }
}

}  // namespace detail

// Loads posts. Malformed records (bad JSON, missing id/text, blank text,
// invalid timestamp, duplicate id) are skipped and counted. In JSON Lines
// input, blank lines and lines starting with '#' are ignored.
inline IngestResult ingest(const std::filesystem::path& path, CorpusFormat format) {
  IngestResult result;
  result.corpus.set_name(path.filename().string());
  std::size_t total = 0;
  if (format == CorpusFormat::JsonLines) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read corpus file " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      const auto trimmed = text::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      ++total;
      auto post = detail::parse_jsonl_record(line);
      if (!post || !result.corpus.add(std::move(*post))) ++result.skipped;
    }
    if (in.bad()) throw IoError("error while reading " + path.string());
  } else {
    std::error_code ec;
    if (!std::filesystem::is_directory(path, ec)) throw IoError("cannot read corpus directory " + path.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      ++total;
      Post post;
      post.post_id = f.filename().string();
      post.text = read_file(f);
      if (!result.corpus.add(std::move(post))) ++result.skipped;
    }
  }
  detail::check_malformed_ratio(total, result.skipped, path);
  return result;
}

inline IngestResult ingest(const std::filesystem::path& path) { return ingest(path, detect_format(path)); }

inline std::string post_to_jsonl(const Post& p) {
  nlohmann::ordered_json obj;
  obj["id"] = p.post_id;
  obj["thread_id"] = p.thread_id;
  obj["user_id"] = p.user_id;
  if (p.timestamp) obj["timestamp"] = *p.timestamp;
  obj["text"] = p.text;
  return obj.dump();
}

inline std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& p : corpus.posts()) {
    out += post_to_jsonl(p);
    out += '\n';
  }
  return out;
}

inline void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  write_file_atomic(path, corpus_to_jsonl(corpus));
}

}  // namespace dagon
