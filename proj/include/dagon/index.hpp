#pragma once

// Positional inverted index over a corpus. Each post is one document;
// postings carry token positions so multi-token terms can be matched as
// contiguous sequences, and code-point offsets into the raw post text so
// context windows can be cut from the original.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dagon/corpus.hpp"
#include "dagon/error.hpp"
#include "dagon/io.hpp"
#include "dagon/text.hpp"

namespace dagon {

struct Occurrence {
  std::string post_id;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::size_t post_index = 0;  // position in the corpus

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

inline std::uint64_t corpus_fingerprint(const Corpus& corpus) {
  std::uint64_t h = fnv1a(corpus.name());
  for (const auto& p : corpus.posts()) {
    h = fnv1a(p.post_id, h);
    h = fnv1a(std::string_view("\x1f", 1), h);
    h = fnv1a(p.text, h);
    h = fnv1a(std::string_view("\x1e", 1), h);
  }
  return h;
}

class Index {
 public:
  static constexpr char kMagic[8] = {'D', 'A', 'G', 'O', 'N', 'I', 'D', 'X'};
  static constexpr std::uint32_t kVersion = 1;

  struct TokenRec {
    std::uint32_t id;
    std::uint32_t sentence;
    std::uint32_t char_begin;
    std::uint32_t char_end;
  };

  struct Posting {
    std::uint32_t rank;      // post rank in post_id order
    std::uint32_t position;  // token position within the post
  };

  Index() = default;

  static Index build(const Corpus& corpus) {
    Index idx;
    idx.fingerprint_ = corpus_fingerprint(corpus);
    idx.post_ids_.reserve(corpus.doc_count());
    idx.post_tokens_.resize(corpus.doc_count());
    for (std::size_t i = 0; i < corpus.doc_count(); ++i) {
      const Post& post = corpus[i];
      idx.post_ids_.push_back(post.post_id);
      auto& recs = idx.post_tokens_[i];
      for (const auto& tok : text::tokenize(post.text)) {
        recs.push_back(TokenRec{idx.intern(tok.norm), tok.sentence, static_cast<std::uint32_t>(tok.char_begin),
                                static_cast<std::uint32_t>(tok.char_end)});
      }
    }
    idx.finalize();
    return idx;
  }

  std::size_t doc_count() const { return post_ids_.size(); }
  std::size_t vocabulary_size() const { return vocab_.size(); }
  std::uint64_t fingerprint() const { return fingerprint_; }
  bool matches(const Corpus& corpus) const { return fingerprint_ == corpus_fingerprint(corpus); }

  const std::string& token(std::uint32_t id) const { return vocab_[id]; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }

  std::optional<std::uint32_t> token_id(std::string_view normalized) const {
    auto it = ids_.find(std::string(normalized));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  // Document frequency of a single normalized token.
  std::size_t document_frequency(std::string_view normalized) const {
    auto id = token_id(normalized);
    return id ? df_[*id] : 0;
  }

  const std::vector<Posting>& postings(std::string_view normalized) const {
    static const std::vector<Posting> kEmpty;
    auto id = token_id(normalized);
    return id ? postings_[*id] : kEmpty;
  }

  // Tokens of the post at corpus position `i`.
  const std::vector<TokenRec>& post_tokens(std::size_t i) const { return post_tokens_[i]; }
  const std::string& post_id(std::size_t i) const { return post_ids_[i]; }

  // Occurrences of `term` (normalized then matched as a contiguous token run
  // within one sentence), first occurrence per post only, at most `max_posts`
  // posts, ordered by (post_id, char_start).
  std::vector<Occurrence> find_occurrences(std::string_view term, std::size_t max_posts) const {
    if (max_posts == 0) throw ConfigError("max_posts must be positive");
    std::vector<Occurrence> out;
    auto ids = resolve(term);
    if (ids.empty()) return out;
    for (const Posting& p : postings_[ids.front()]) {
      if (out.size() >= max_posts) break;
      const std::size_t pos = by_rank_[p.rank];
      if (!out.empty() && out.back().post_index == pos) continue;
      const auto& recs = post_tokens_[pos];
      if (!match_at(recs, p.position, ids)) continue;
      out.push_back(Occurrence{post_ids_[pos], recs[p.position].char_begin,
                               recs[p.position + ids.size() - 1].char_end, pos});
    }
    return out;
  }

  // Number of posts containing `term` (any token count).
  std::size_t term_document_frequency(std::string_view term) const {
    auto ids = resolve(term);
    if (ids.empty()) return 0;
    if (ids.size() == 1) return df_[ids.front()];
    return find_occurrences(term, kUnlimited).size();
  }

  std::string serialize() const {
    std::string out(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    put_u64(out, fingerprint_);
    put_u32(out, static_cast<std::uint32_t>(vocab_.size()));
    for (const auto& v : vocab_) put_str(out, v);
    put_u32(out, static_cast<std::uint32_t>(post_ids_.size()));
    for (std::size_t i = 0; i < post_ids_.size(); ++i) {
      put_str(out, post_ids_[i]);
      put_u32(out, static_cast<std::uint32_t>(post_tokens_[i].size()));
      for (const auto& r : post_tokens_[i]) {
        put_u32(out, r.id);
        put_u32(out, r.sentence);
        put_u32(out, r.char_begin);
        put_u32(out, r.char_end);
      }
    }
    return out;
  }

  static Index deserialize(std::string_view data) {
    Reader rd{data};
    if (data.size() < sizeof kMagic || std::memcmp(data.data(), kMagic, sizeof kMagic) != 0) {
      throw FormatError("not an index file (bad magic)");
    }
    rd.pos = sizeof kMagic;
    const auto version = rd.u32();
    if (version != kVersion) {
      throw FormatError("index file version " + std::to_string(version) + " does not match supported version " +
                        std::to_string(kVersion));
    }
    Index idx;
    idx.fingerprint_ = rd.u64();
    const auto nvocab = rd.u32();
    for (std::uint32_t i = 0; i < nvocab; ++i) idx.intern(rd.str());
    if (idx.vocab_.size() != nvocab) throw FormatError("index vocabulary contains duplicates");
    const auto nposts = rd.u32();
    idx.post_ids_.reserve(nposts);
    idx.post_tokens_.resize(nposts);
    for (std::uint32_t i = 0; i < nposts; ++i) {
      idx.post_ids_.push_back(rd.str());
      const auto ntok = rd.u32();
      auto& recs = idx.post_tokens_[i];
      recs.reserve(ntok);
      for (std::uint32_t t = 0; t < ntok; ++t) {
        TokenRec r{rd.u32(), rd.u32(), rd.u32(), rd.u32()};
        if (r.id >= nvocab) throw FormatError("index token id out of range");
        recs.push_back(r);
      }
    }
    if (rd.pos != data.size()) throw FormatError("trailing bytes in index file");
    idx.finalize();
    return idx;
  }

  void save(const std::filesystem::path& path) const { write_file_atomic(path, serialize()); }
  static Index load(const std::filesystem::path& path) { return deserialize(read_file(path)); }

  friend bool operator==(const Index& a, const Index& b) {
    if (a.fingerprint_ != b.fingerprint_ || a.vocab_ != b.vocab_ || a.post_ids_ != b.post_ids_) return false;
    if (a.df_ != b.df_) return false;
    for (std::size_t i = 0; i < a.postings_.size(); ++i) {
      const auto& x = a.postings_[i];
      const auto& y = b.postings_[i];
      if (x.size() != y.size()) return false;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k].rank != y[k].rank || x[k].position != y[k].position) return false;
      }
    }
    return true;
  }

 private:
  std::uint32_t intern(const std::string& tok) {
    auto [it, inserted] = ids_.emplace(tok, static_cast<std::uint32_t>(vocab_.size()));
    if (inserted) vocab_.push_back(tok);
    return it->second;
  }

  std::vector<std::uint32_t> resolve(std::string_view term) const {
    std::vector<std::uint32_t> ids;
    for (const auto& t : text::term_tokens(term)) {
      auto id = token_id(t);
      if (!id) return {};
      ids.push_back(*id);
    }
    return ids;
  }

  static bool match_at(const std::vector<TokenRec>& recs, std::size_t pos, const std::vector<std::uint32_t>& ids) {
    if (pos + ids.size() > recs.size()) return false;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (recs[pos + k].id != ids[k] || recs[pos + k].sentence != recs[pos].sentence) return false;
    }
    return true;
  }

  void finalize() {
    const std::size_t n = post_ids_.size();
    by_rank_.resize(n);
    std::iota(by_rank_.begin(), by_rank_.end(), std::size_t{0});
    std::stable_sort(by_rank_.begin(), by_rank_.end(),
                     [&](std::size_t a, std::size_t b) { return post_ids_[a] < post_ids_[b]; });
    postings_.assign(vocab_.size(), {});
    df_.assign(vocab_.size(), 0);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& recs = post_tokens_[by_rank_[r]];
      for (std::size_t k = 0; k < recs.size(); ++k) {
        auto& list = postings_[recs[k].id];
        if (list.empty() || list.back().rank != r) ++df_[recs[k].id];
        list.push_back(Posting{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(k)});
      }
    }
  }

  static void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  static void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  static void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
  }

  struct Reader {
    std::string_view data;
    std::size_t pos = 0;
    void need(std::size_t n) const {
      if (pos + n > data.size()) throw FormatError("truncated index file");
    }
    std::uint32_t u32() {
      need(4);
      std::uint32_t v = 0;
      for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
      return v;
    }
    std::uint64_t u64() {
      need(8);
      std::uint64_t v = 0;
      for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
      return v;
    }
    std::string str() {
      const auto n = u32();
      need(n);
      std::string s(data.substr(pos, n));
      pos += n;
      return s;
    }
  };

  std::uint64_t fingerprint_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> post_ids_;
  std::vector<std::vector<TokenRec>> post_tokens_;
  std::vector<std::size_t> by_rank_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::uint32_t> df_;
};

}  // namespace dagon
