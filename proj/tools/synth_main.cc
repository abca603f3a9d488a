/*
 * Copyright 2026 The MetaRH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Writes the planted-pattern corpus used by the overfit and smoke checks.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "metarh/common/error.h"
#include "metarh/dataset/synthetic.h"
#include "metarh/hkg/fact_io.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic hyper-relational corpus"};
  metarh::dataset::SyntheticConfig config;
  std::string out;
  app.add_option("--out", out, "output JSON-lines file")->required();
  app.add_option("--relations", config.num_relations);
  app.add_option("--width", config.width);
  app.add_option("--height", config.height);
  app.add_option("--values", config.num_values);
  app.add_option("--max-offset", config.max_offset);
  app.add_option("--facts-per-relation", config.facts_per_relation);
  app.add_option("--seed", config.seed);
  CLI11_PARSE(app, argc, argv);
  try {
    metarh::dataset::SyntheticCorpus corpus =
        metarh::dataset::GenerateSyntheticCorpus(config);
    metarh::WriteFactsFile(out, corpus.facts, corpus.vocab);
    std::cout << corpus.facts.size() << " facts written to " << out << std::endl;
  } catch (const metarh::Error& e) {
    std::cerr << "error " << metarh::ErrorClassName(e.error_class()) << ": "
              << e.what() << std::endl;
    return 1;
  }
  return 0;
}
