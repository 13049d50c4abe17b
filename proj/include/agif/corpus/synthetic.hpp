// Copyright 2026 The AGIF Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Template-based generator for small single-intent corpora, used for tests,
// demos and the overfit check.

#ifndef AGIF_CORPUS_SYNTHETIC_HPP_
#define AGIF_CORPUS_SYNTHETIC_HPP_

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "agif/autodiff/random.hpp"
#include "agif/corpus/utterance.hpp"

namespace agif::corpus {

struct IntentTemplates {
  std::string intent;
  // Words; "{name}" is replaced by a value of slot type `name`.
  std::vector<std::vector<std::string>> templates;
};

struct SyntheticGrammar {
  std::vector<IntentTemplates> intents;
  std::map<std::string, std::vector<std::vector<std::string>>> slot_values;
};

/// Built-in grammar with up to six intents, each owning two slot types.
inline SyntheticGrammar toy_grammar(std::size_t num_intents = 6) {
  SyntheticGrammar g;
  g.intents = {
      {"PlayMusic",
       {{"play", "{song}", "by", "{artist}"},
        {"put", "on", "some", "{artist}"},
        {"i", "want", "to", "hear", "{song}"}}},
      {"GetWeather",
       {{"what", "is", "the", "weather", "in", "{city}", "{when}"},
        {"will", "it", "rain", "{when}", "in", "{city}"},
        {"forecast", "for", "{city}"}}},
      {"BookRestaurant",
       {{"book", "a", "table", "at", "{restaurant}", "for", "{party}"},
        {"reserve", "{restaurant}", "for", "{party}"}}},
      {"AddToPlaylist",
       {{"add", "{song}", "to", "my", "{playlist}", "playlist"},
        {"put", "this", "track", "into", "{playlist}"}}},
      {"RateBook",
       {{"rate", "{book}", "{rating}", "stars"},
        {"give", "{book}", "a", "rating", "of", "{rating}"}}},
      {"SearchScreening",
       {{"find", "showtimes", "for", "{movie}", "at", "{cinema}"},
        {"when", "is", "{movie}", "playing"}}},
  };
  if (num_intents < 1 || num_intents > g.intents.size()) {
    throw std::invalid_argument("toy_grammar: 1..6 intents supported");
  }
  g.intents.resize(num_intents);
  g.slot_values = {
      {"song", {{"yesterday"}, {"hey", "jude"}, {"blue", "in", "green"}}},
      {"artist", {{"miles", "davis"}, {"adele"}, {"the", "beatles"}}},
      {"city", {{"paris"}, {"new", "york"}, {"tokyo"}}},
      {"when", {{"tomorrow"}, {"this", "weekend"}, {"tonight"}}},
      {"restaurant", {{"nopa"}, {"blue", "hill"}, {"chez", "panisse"}}},
      {"party", {{"two"}, {"four", "people"}, {"six"}}},
      {"playlist", {{"workout"}, {"road", "trip"}, {"chill"}}},
      {"book", {{"dune"}, {"the", "hobbit"}, {"emma"}}},
      {"rating", {{"three"}, {"five"}, {"one"}}},
      {"movie", {{"alien"}, {"the", "matrix"}, {"up"}}},
      {"cinema", {{"amc"}, {"the", "roxie"}, {"regal"}}},
  };
  return g;
}

/// Draws `count` single-intent utterances with BIO slot labels.
inline std::vector<Utterance> generate_single_intent(const SyntheticGrammar& g,
                                                     std::size_t count, Rng& rng) {
  if (g.intents.empty()) throw std::invalid_argument("grammar has no intents");
  std::vector<Utterance> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const auto& it = g.intents[rng.below(g.intents.size())];
    const auto& tmpl = it.templates[rng.below(it.templates.size())];
    Utterance u;
    u.intents = {it.intent};
    for (const auto& word : tmpl) {
      if (word.size() > 2 && word.front() == '{' && word.back() == '}') {
        const std::string slot = word.substr(1, word.size() - 2);
        auto found = g.slot_values.find(slot);
        if (found == g.slot_values.end() || found->second.empty()) {
          throw std::invalid_argument("grammar has no values for slot " + slot);
        }
        const auto& value = found->second[rng.below(found->second.size())];
        for (std::size_t i = 0; i < value.size(); ++i) {
          u.tokens.push_back(value[i]);
          u.slots.push_back((i == 0 ? "B-" : "I-") + slot);
        }
      } else {
        u.tokens.push_back(word);
        u.slots.push_back("O");
      }
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace agif::corpus

#endif  // AGIF_CORPUS_SYNTHETIC_HPP_
