#include "sg2caps/vocab.hpp"

#include <sstream>

namespace sg2caps::graph {

std::string map_to_caption_vocab(const std::string& label, const Vocabulary& vocab) {
  if (vocab.contains(label)) return label;

  std::istringstream words(label);
  std::string word, hit;
  while (words >> word) {
    if (vocab.contains(word)) hit = word;  // keep the last sub-token that matches
  }
  return hit.empty() ? Vocabulary::kUnkToken : hit;
}

}  // namespace sg2caps::graph
