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

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>

#include "agif/corpus/batch.hpp"
#include "agif/corpus/dataset_io.hpp"
#include "agif/corpus/mixer.hpp"
#include "agif/corpus/synthetic.hpp"
#include "agif/corpus/vocab.hpp"
#include "fixtures.hpp"

namespace agif::corpus {
namespace {

TEST(DatasetIo, ParsesMultiIntentBlock) {
  const auto data = parse_dataset_text("play O\njazz B-genre\nPlayMusic#GetWeather\n");
  ASSERT_EQ(data.size(), 1u);
  EXPECT_EQ(data[0].tokens, (std::vector<std::string>{"play", "jazz"}));
  EXPECT_EQ(data[0].slots, (std::vector<std::string>{"O", "B-genre"}));
  EXPECT_EQ(data[0].intents, (std::vector<std::string>{"PlayMusic", "GetWeather"}));
}

TEST(DatasetIo, ToleratesBlankRunsAndCrlf) {
  const auto data = parse_dataset_text("\n\na O\r\nX\r\n\n\n\nb O\nY\n\n");
  ASSERT_EQ(data.size(), 2u);
  EXPECT_EQ(data[1].intents, std::vector<std::string>{"Y"});
}

TEST(DatasetIo, EmptyListAndSingleBlockFormatting) {
  EXPECT_EQ(format_dataset({}), "");
  Utterance u{{"hi"}, {"O"}, {"Greet"}};
  EXPECT_EQ(format_dataset({u}), "hi O\nGreet\n");
  EXPECT_EQ(format_dataset({u, u}), "hi O\nGreet\n\nhi O\nGreet\n");
}

TEST(DatasetIo, ErrorsCarryLineNumbers) {
  try {
    parse_dataset_text("a O\nb\nX\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_dataset_text("a O\nX\n\nb O\nc O\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);  // block ends without an intent line
  }
  EXPECT_THROW(parse_dataset_text("a O b\nX\n"), ParseError);
  EXPECT_THROW(parse_dataset_text("a O\nX#X\n"), ParseError);
}

TEST(DatasetIo, FileErrorsNameThePath) {
  const auto dir = fixtures::temp_dir("io_err");
  const auto path = (dir / "bad.txt").string();
  std::ofstream(path) << "a O\nb\nX\n";
  try {
    parse_dataset(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(path + ":2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_dataset((dir / "missing.txt").string()), std::runtime_error);
}

TEST(DatasetIo, RoundTripThroughFile) {
  Rng rng(4);
  std::vector<Utterance> data;
  for (int i = 0; i < 200; ++i) data.push_back(fixtures::random_utterance(rng));
  const auto path = (fixtures::temp_dir("io_rt") / "d.txt").string();
  write_dataset(data, path);
  EXPECT_EQ(parse_dataset(path), data);
}

TEST(Vocab, ReservedEntriesAndUnknownTokens) {
  const auto v = build_vocab({Utterance{{"play", "jazz"}, {"O", "B-genre"}, {"PlayMusic"}}});
  EXPECT_EQ(v.num_tokens(), 4u);
  EXPECT_EQ(v.token_id("<pad>"), kPadId);
  EXPECT_EQ(v.token_id("play"), 2);
  EXPECT_EQ(v.token_id("blues"), kUnkId);
  EXPECT_EQ(v.num_slots(), 3u);
  EXPECT_EQ(v.slot_id("B-unseen"), v.slot_id("O"));
  EXPECT_EQ(v.slot_label(kPadId), "O");
  EXPECT_THROW(build_vocab({}), std::invalid_argument);
}

TEST(Vocab, LowercaseOption) {
  const auto v = build_vocab({Utterance{{"Play"}, {"O"}, {"A"}}}, true);
  EXPECT_EQ(v.token_id("PLAY"), v.token_id("play"));
  EXPECT_NE(v.token_id("play"), kUnkId);
}

TEST(Batch, MaskAndPadding) {
  const std::vector<Utterance> data{{{"a", "b"}, {"O", "O"}, {"X"}},
                                    {{"a", "b", "c"}, {"O", "O", "B-s"}, {"X", "Y"}}};
  const auto v = build_vocab(data);
  const auto b = encode_batch(data, v);
  EXPECT_EQ(b.mask.row(0), (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_EQ(b.mask.row(1), (std::vector<std::uint8_t>{1, 1, 1}));
  EXPECT_EQ(b.token_ids(0, 2), kPadId);
  EXPECT_EQ(b.slot_ids(0, 2), kPadId);
  EXPECT_EQ(b.intent_targets.row(1), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(b.gold_intents[0], std::vector<int>{0});
  EXPECT_EQ(b.tokens(0).size(), 2u);
}

TEST(Mixer, ConcatenateInsertsConjunction) {
  const Utterance a{{"x", "y", "z"}, {"B-s", "I-s", "O"}, {"A"}};
  const Utterance b{{"p", "q", "r", "s"}, {"O", "O", "B-t", "O"}, {"B"}};
  const auto m = concatenate({&a, &b}, "and");
  EXPECT_EQ(m.tokens.size(), 8u);
  EXPECT_EQ(m.tokens[3], "and");
  EXPECT_EQ(m.slots[3], "O");
  EXPECT_EQ(m.intents, (std::vector<std::string>{"A", "B"}));
}

TEST(Mixer, SingleIntentRatioReturnsSourceUtterances) {
  Rng rng(7);
  const auto source = generate_single_intent(toy_grammar(3), 30, rng);
  MixSpec spec;
  spec.ratio = {1.0, 0.0, 0.0};
  for (const auto& u : mix_datasets(source, spec, 50, rng)) {
    EXPECT_NE(std::find(source.begin(), source.end(), u), source.end());
  }
}

TEST(Mixer, DistinctIntentsAndDeterminism) {
  Rng a(3), b(3);
  const auto source = generate_single_intent(toy_grammar(6), 100, a);
  generate_single_intent(toy_grammar(6), 100, b);
  MixSpec spec;
  const auto x = mix_datasets(source, spec, 300, a);
  const auto y = mix_datasets(source, spec, 300, b);
  EXPECT_EQ(x, y);
  for (const auto& u : x) {
    EXPECT_EQ(std::set<std::string>(u.intents.begin(), u.intents.end()).size(), u.intents.size());
  }
}

TEST(Mixer, RejectsBadSpecs) {
  Rng rng(1);
  const auto source = generate_single_intent(toy_grammar(2), 10, rng);
  MixSpec spec;
  spec.ratio = {0.5, 0.6, 0.0};
  EXPECT_THROW(mix_datasets(source, spec, 5, rng), std::invalid_argument);
  spec.ratio = {0.3, 0.5, 0.2};  // three intents requested, only two exist
  EXPECT_THROW(mix_datasets(source, spec, 5, rng), std::invalid_argument);
  spec.ratio = {0.5, 0.5, 0.0};
  spec.conjunction = "and then";
  EXPECT_THROW(mix_datasets(source, spec, 5, rng), std::invalid_argument);
}

TEST(Mixer, ReferenceSplitSizes) {
  EXPECT_EQ(split_sizes_reference(DatasetPreset::kMixSnips), (SplitSizes{45000, 2500, 2500}));
  EXPECT_EQ(split_sizes_reference(DatasetPreset::kMixAtis), (SplitSizes{18000, 1000, 1000}));
  EXPECT_EQ(split_sizes_reference(DatasetPreset::kDstc4), (SplitSizes{12759, 4812, 7848}));
}

TEST(Mixer, SplitsUseOnlyTheirOwnSource) {
  Rng rng(2);
  Splits source;
  const auto g = toy_grammar(3);
  source.train = generate_single_intent(g, 40, rng);
  source.dev = {Utterance{{"dev"}, {"O"}, {"PlayMusic"}}, Utterance{{"dev"}, {"O"}, {"GetWeather"}},
                Utterance{{"dev"}, {"O"}, {"BookRestaurant"}}};
  source.test = source.dev;
  MixSpec spec;
  spec.sizes = {20, 10, 10};
  const auto mixed = mix_splits(source, spec);
  EXPECT_EQ(mixed.train.size(), 20u);
  for (const auto& u : mixed.dev) {
    for (const auto& t : u.tokens) EXPECT_TRUE(t == "dev" || t == "and");
  }
}

TEST(Synthetic, BioLabelsAreWellFormed) {
  Rng rng(5);
  for (const auto& u : generate_single_intent(toy_grammar(6), 200, rng)) {
    validate(u);
    for (std::size_t t = 0; t < u.slots.size(); ++t) {
      if (u.slots[t].rfind("I-", 0) == 0) {
        ASSERT_GT(t, 0u);
        EXPECT_EQ(u.slots[t - 1].substr(2), u.slots[t].substr(2));
      }
    }
  }
  EXPECT_THROW(toy_grammar(7), std::invalid_argument);
}

}  // namespace
}  // namespace agif::corpus
