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

// Writes single-intent train/dev/test splits drawn from the built-in toy
// grammar, suitable as input to `agif mix`.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "agif/autodiff/random.hpp"
#include "agif/corpus/dataset_io.hpp"
#include "agif/corpus/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate toy single-intent splits"};
  std::string out;
  std::size_t intents = 6, train = 600, dev = 60, test = 60;
  std::uint64_t seed = 0;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--intents", intents, "Number of intents (1-6)")->check(CLI::Range(1, 6));
  app.add_option("--train", train, "Train utterances");
  app.add_option("--dev", dev, "Dev utterances");
  app.add_option("--test", test, "Test utterances");
  app.add_option("--seed", seed, "Random seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  try {
    const auto grammar = agif::corpus::toy_grammar(intents);
    agif::Rng root(seed);
    std::filesystem::create_directories(out);
    const std::filesystem::path base(out);
    const std::pair<const char*, std::size_t> splits[] = {
        {"train.txt", train}, {"dev.txt", dev}, {"test.txt", test}};
    for (const auto& [name, count] : splits) {
      agif::Rng rng = root.split();
      agif::corpus::write_dataset(agif::corpus::generate_single_intent(grammar, count, rng),
                                  (base / name).string());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
