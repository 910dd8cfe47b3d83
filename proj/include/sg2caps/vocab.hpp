#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "sg2caps/errors.hpp"

namespace sg2caps::graph {

// Bidirectional token <-> index map. Indices 0..3 are always the four
// reserved control tokens, in this order.
class Vocabulary {
 public:
  static constexpr std::size_t kBos = 0;
  static constexpr std::size_t kEos = 1;
  static constexpr std::size_t kUnk = 2;
  static constexpr std::size_t kPad = 3;

  static constexpr const char* kBosToken = "<bos>";
  static constexpr const char* kEosToken = "<eos>";
  static constexpr const char* kUnkToken = "<unk>";
  static constexpr const char* kPadToken = "<pad>";

  Vocabulary() {
    for (const char* t : {kBosToken, kEosToken, kUnkToken, kPadToken}) add(t);
  }

  // Builds the reserved tokens plus the given words, skipping duplicates.
  static Vocabulary from_tokens(const std::vector<std::string>& words) {
    Vocabulary v;
    for (const auto& w : words) v.add(w);
    return v;
  }

  // Appends token if new; returns its index either way.
  std::size_t add(const std::string& token) {
    auto it = index_.find(token);
    if (it != index_.end()) return it->second;
    tokens_.push_back(token);
    index_.emplace(token, tokens_.size() - 1);
    return tokens_.size() - 1;
  }

  bool contains(const std::string& token) const { return index_.count(token) > 0; }

  std::size_t index_of(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end())
      throw ValidationError("token not in vocabulary: '" + token + "'");
    return it->second;
  }

  std::size_t index_or_unk(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
  }

  const std::string& token(std::size_t index) const {
    if (index >= tokens_.size())
      throw ValidationError("vocabulary index out of range: " + std::to_string(index));
    return tokens_[index];
  }

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Maps a source label into the caption vocabulary: exact match wins, else the
// last whitespace-separated sub-token found in the vocabulary (so
// "potted plant" becomes "plant"), else the unknown token.
std::string map_to_caption_vocab(const std::string& label, const Vocabulary& vocab);

}  // namespace sg2caps::graph
