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

// Shared test data builders.

#ifndef AGIF_TESTS_FIXTURES_HPP_
#define AGIF_TESTS_FIXTURES_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "agif/autodiff/random.hpp"
#include "agif/corpus/mixer.hpp"
#include "agif/corpus/synthetic.hpp"
#include "agif/corpus/utterance.hpp"

namespace fixtures {

using agif::Rng;
using agif::corpus::Utterance;

/// Random BIO sequence over `types` slot types ("a", "b", ...).
inline std::vector<std::string> random_bio(std::size_t length, std::size_t types, Rng& rng) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < length; ++t) {
    const auto r = rng.below(2 * types + 1);
    if (r == 0) {
      out.push_back("O");
    } else {
      const std::string type(1, static_cast<char>('a' + (r - 1) % types));
      out.push_back((r <= types ? "B-" : "I-") + type);
    }
  }
  return out;
}

/// Random well-formed utterance with printable tokens and 1-3 intents.
inline Utterance random_utterance(Rng& rng) {
  static const char* kWords[] = {"play", "jazz", "in", "paris", "new", "york", "o'clock",
                                 "rock&roll", "x-y", "caf\xc3\xa9", "3", "it's"};
  static const char* kIntents[] = {"PlayMusic", "GetWeather", "atis_flight", "Book_Restaurant"};
  Utterance u;
  const std::size_t n = 1 + rng.below(12);
  u.slots = random_bio(n, 3, rng);
  for (std::size_t i = 0; i < n; ++i) u.tokens.push_back(kWords[rng.below(12)]);
  std::vector<std::string> pool(std::begin(kIntents), std::end(kIntents));
  rng.shuffle(pool);
  pool.resize(1 + rng.below(3));
  u.intents = pool;
  return u;
}

/// `count` multi-intent utterances over 2 intents and 4 slot types.
inline std::vector<Utterance> toy_multi_intent(std::size_t count, std::uint64_t seed,
                                               std::array<double, 3> ratio = {0.5, 0.5, 0.0}) {
  Rng rng(seed);
  const auto grammar = agif::corpus::toy_grammar(2);
  const auto source = agif::corpus::generate_single_intent(grammar, 2 * count + 8, rng);
  agif::corpus::MixSpec spec;
  spec.ratio = ratio;
  return agif::corpus::mix_datasets(source, spec, count, rng);
}

/// Fresh, empty temporary directory.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("agif_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures

#endif  // AGIF_TESTS_FIXTURES_HPP_
