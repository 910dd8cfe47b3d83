#pragma once

#include <set>
#include <string>
#include <vector>

#include "sg2caps/scene_graph.hpp"

namespace sg2caps::tsg {

// Closed word lists driving the rule-based parser. A token claimed by
// several lists resolves as adjective > preposition > verb > noun.
struct Lexicon {
  std::set<std::string> nouns;
  std::set<std::string> verbs;
  std::set<std::string> adjectives;
  std::set<std::string> prepositions;
};

Lexicon lexicon_from_json(const std::string& text, const std::string& origin = "");
std::string lexicon_to_json(const Lexicon& lex);

// Undoes -s / -ing / -ed inflection (with consonant-doubling and dropped-e
// repair) until a form appears in the given set; returns the surface form
// unchanged when nothing matches.
std::string strip_inflection(const std::string& token, const std::set<std::string>& forms);

// Caption -> ungrounded scene graph: nouns become nodes (deduplicated per
// surface form), an adjective directly before a noun becomes its attribute,
// verbs/prepositions between two nouns become edges. Unknown tokens are
// skipped; the parse is total.
graph::SceneGraph parse_caption(const std::string& caption, const Lexicon& lexicon);

}  // namespace sg2caps::tsg
