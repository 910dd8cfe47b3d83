#include "sg2caps/tsg.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "json.hpp"

namespace sg2caps::tsg {

using graph::SceneGraph;
using nlohmann::json;

Lexicon lexicon_from_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError((origin.empty() ? std::string("lexicon") : origin) +
                          ": parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
  }
  Lexicon lex;
  auto read = [&](const char* key, std::set<std::string>& into) {
    for (const auto& token : root.at(key)) into.insert(token.get<std::string>());
  };
  read("nouns", lex.nouns);
  read("verbs", lex.verbs);
  read("adjectives", lex.adjectives);
  read("prepositions", lex.prepositions);
  return lex;
}

std::string lexicon_to_json(const Lexicon& lex) {
  json root;
  root["nouns"] = lex.nouns;
  root["verbs"] = lex.verbs;
  root["adjectives"] = lex.adjectives;
  root["prepositions"] = lex.prepositions;
  return root.dump(2) + "\n";
}

std::string strip_inflection(const std::string& token, const std::set<std::string>& forms) {
  if (forms.count(token)) return token;
  auto try_stems = [&](const std::string& stem) -> std::string {
    if (forms.count(stem)) return stem;
    if (forms.count(stem + "e")) return stem + "e";  // ride -> riding
    if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
      const std::string undoubled = stem.substr(0, stem.size() - 1);  // run -> running
      if (forms.count(undoubled)) return undoubled;
    }
    return "";
  };
  for (const char* suffix : {"ing", "ed", "s"}) {
    const std::size_t len = std::string(suffix).size();
    if (token.size() > len && token.compare(token.size() - len, len, suffix) == 0) {
      const std::string hit = try_stems(token.substr(0, token.size() - len));
      if (!hit.empty()) return hit;
    }
  }
  return token;
}

namespace {

enum class WordClass { adjective, preposition, verb, noun, unknown };

std::vector<std::string> tokenize_lower(const std::string& caption) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : caption) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

}  // namespace

SceneGraph parse_caption(const std::string& caption, const Lexicon& lexicon) {
  SceneGraph g;
  g.image_id = "";
  g.source = graph::GraphSource::tsg;

  const std::vector<std::string> tokens = tokenize_lower(caption);

  // Classify each token; lexicon form recorded so edges and attributes use
  // base forms ("rides" -> "ride").
  std::vector<WordClass> classes(tokens.size(), WordClass::unknown);
  std::vector<std::string> lex_forms(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (lexicon.adjectives.count(t)) {
      classes[i] = WordClass::adjective;
      lex_forms[i] = t;
    } else if (lexicon.prepositions.count(t)) {
      classes[i] = WordClass::preposition;
      lex_forms[i] = t;
    } else if (lexicon.verbs.count(t)) {
      classes[i] = WordClass::verb;
      lex_forms[i] = t;
    } else if (lexicon.nouns.count(t)) {
      classes[i] = WordClass::noun;
      lex_forms[i] = t;
    } else {
      const std::string stripped = strip_inflection(t, lexicon.verbs);
      if (stripped != t || lexicon.verbs.count(stripped)) {
        classes[i] = WordClass::verb;
        lex_forms[i] = stripped;
      }
    }
  }

  std::map<std::string, int> node_of;
  auto node_for = [&](const std::string& label) {
    auto it = node_of.find(label);
    if (it != node_of.end()) return it->second;
    graph::ObjectNode node;
    node.id = static_cast<int>(g.nodes.size());
    node.label = label;
    node.confidence = 1.0;
    g.nodes.push_back(node);
    node_of.emplace(label, node.id);
    return node.id;
  };

  int previous_noun = -1;
  std::vector<std::string> pending_relations;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    switch (classes[i]) {
      case WordClass::noun: {
        const int node_id = node_for(lex_forms[i]);
        if (i > 0 && classes[i - 1] == WordClass::adjective) {
          graph::ObjectNode& node = *g.find_node(node_id);
          const std::string& attr = lex_forms[i - 1];
          const bool present =
              std::any_of(node.attributes.begin(), node.attributes.end(),
                          [&](const graph::AttributeEntry& a) { return a.label == attr; });
          if (!present) node.attributes.push_back({attr, 1.0});
        }
        if (previous_noun >= 0 && previous_noun != node_id) {
          for (const std::string& predicate : pending_relations) {
            const bool duplicate = std::any_of(
                g.edges.begin(), g.edges.end(), [&](const graph::RelationEdge& e) {
                  return e.subject_id == previous_noun && e.object_id == node_id &&
                         e.predicate == predicate;
                });
            if (!duplicate) g.edges.push_back({previous_noun, node_id, predicate, 1.0});
          }
        }
        pending_relations.clear();
        previous_noun = node_id;
        break;
      }
      case WordClass::verb:
      case WordClass::preposition:
        if (previous_noun >= 0) pending_relations.push_back(lex_forms[i]);
        break;
      case WordClass::adjective:
      case WordClass::unknown:
        break;
    }
  }
  return g;
}

}  // namespace sg2caps::tsg
