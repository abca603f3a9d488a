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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "metarh/common/rng.h"
#include "metarh/dataset/builder.h"
#include "metarh/dataset/synthetic.h"
#include "metarh/hkg/background_index.h"
#include "metarh/hkg/knowledge_store.h"
#include "test_support.h"

namespace metarh::dataset {
namespace {

using testing::ThrownClass;

struct Corpus {
  Vocabulary vocab;
  std::vector<HyperFact> facts;
};

// Random corpus: `relations` relations with instance counts spread around the
// builder bounds, some qualifiers drawn from the same relation pool.
Corpus RandomCorpus(std::uint64_t seed, int entities, int relations,
                    int num_facts) {
  Corpus c;
  Rng rng(seed);
  for (int i = 0; i < entities; ++i) c.vocab.AddEntity("E" + std::to_string(i));
  for (int i = 0; i < relations; ++i) c.vocab.AddRelation("R" + std::to_string(i));
  auto entity = [&] { return EntityId{static_cast<std::int32_t>(rng.UniformIndex(entities))}; };
  auto relation = [&] { return RelationId{static_cast<std::int32_t>(rng.UniformIndex(relations))}; };
  for (int i = 0; i < num_facts; ++i) {
    HyperFact f{entity(), relation(), entity(), {}};
    const std::uint64_t m = rng.UniformIndex(4) == 0 ? rng.UniformIndex(3) : 0;
    for (std::uint64_t j = 0; j < m; ++j) f.qualifiers.push_back({relation(), entity()});
    c.facts.push_back(f);
  }
  return c;
}

std::vector<HyperFact> Repeat(Vocabulary& vocab, const std::string& relation,
                              int count) {
  std::vector<HyperFact> out;
  const RelationId r = vocab.AddRelation(relation);
  for (int i = 0; i < count; ++i) {
    out.push_back(HyperFact{vocab.AddEntity(relation + "_h" + std::to_string(i)), r,
                            vocab.AddEntity(relation + "_t" + std::to_string(i)), {}});
  }
  return out;
}

TEST(SelectFewShotTest, LowerBoundIsInclusive) {
  Vocabulary vocab;
  std::vector<HyperFact> corpus = Repeat(vocab, "r19", 19);
  for (const HyperFact& f : Repeat(vocab, "r20", 20)) corpus.push_back(f);
  const auto selected = SelectFewShotRelations(corpus, BuildConfig{});
  EXPECT_EQ(selected, (std::set<RelationId>{*vocab.FindRelation("r20")}));
}

TEST(SelectFewShotTest, UpperBoundAndQualifierOccurrences) {
  Vocabulary vocab;
  BuildConfig config;
  config.min_instances = 2;
  config.max_instances = 3;
  std::vector<HyperFact> corpus = Repeat(vocab, "four", 4);
  for (const HyperFact& f : Repeat(vocab, "three", 3)) corpus.push_back(f);
  // Qualifier-attribute occurrences do not count as instances.
  const RelationId one = vocab.AddRelation("one");
  corpus.push_back(HyperFact{EntityId{0}, one, EntityId{1}, {}});
  corpus[0].qualifiers.push_back({one, EntityId{2}});
  EXPECT_EQ(SelectFewShotRelations(corpus, config),
            (std::set<RelationId>{*vocab.FindRelation("three")}));
  config.min_instances = 10;
  config.max_instances = 20;
  EXPECT_EQ(ThrownClass([&] { SelectFewShotRelations(corpus, config); }),
            ErrorClass::kBuild);
}

TEST(ExtractTest, QualifierExamples) {
  Vocabulary vocab;
  const EntityId a = vocab.AddEntity("A"), b = vocab.AddEntity("B"),
                 c = vocab.AddEntity("C");
  const RelationId q = vocab.AddRelation("q"), p = vocab.AddRelation("p"),
                   q2 = vocab.AddRelation("q2");
  const HyperFact kept{a, q, b, {{p, c}}};
  EXPECT_EQ(ExtractFewShotData({kept}, {q}), std::vector<HyperFact>{kept});
  const HyperFact leaky{a, q, b, {{q2, c}}};
  EXPECT_TRUE(ExtractFewShotData({leaky}, {q, q2}).empty());
}

TEST(ExtractTest, BackgroundExamples) {
  Vocabulary vocab;
  const EntityId a = vocab.AddEntity("A"), b = vocab.AddEntity("B"),
                 c = vocab.AddEntity("C"), d = vocab.AddEntity("D"),
                 x = vocab.AddEntity("X");
  const RelationId q = vocab.AddRelation("q"), p = vocab.AddRelation("p");
  const std::vector<HyperFact> few_shot{{a, q, b, {}}};
  // Mentions via value position, via tail, unrelated, and leaky.
  const HyperFact via_value{c, p, d, {{p, a}}};
  const HyperFact via_tail{d, p, b, {}};
  const HyperFact unrelated{c, p, x, {}};
  const HyperFact leaky{a, p, c, {{q, d}}};
  const auto out = ExtractBackgroundData({via_value, via_tail, unrelated, leaky},
                                         few_shot, {q});
  EXPECT_EQ(out, (std::vector<HyperFact>{via_value, via_tail}));
}

// Two-pass filters written independently of the builder.
TEST(ExtractTest, MatchesBruteForceFilters) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Corpus c = RandomCorpus(seed, 20, 6, 50);
    const std::set<RelationId> few_shot{RelationId{0}, RelationId{2}, RelationId{5}};
    std::vector<HyperFact> expected_few;
    for (const HyperFact& f : c.facts) {
      if (!few_shot.count(f.relation)) continue;
      bool leak = false;
      for (const Qualifier& q : f.qualifiers) leak |= few_shot.count(q.attribute) > 0;
      if (!leak) expected_few.push_back(f);
    }
    const auto few = ExtractFewShotData(c.facts, few_shot);
    EXPECT_EQ(few, expected_few);

    std::set<EntityId> mentioned;
    for (const HyperFact& f : expected_few) {
      mentioned.insert(f.head);
      mentioned.insert(f.tail);
      for (const Qualifier& q : f.qualifiers) mentioned.insert(q.value);
    }
    std::vector<HyperFact> expected_bg;
    for (const HyperFact& f : c.facts) {
      bool uses_few = few_shot.count(f.relation) > 0;
      bool mentions = mentioned.count(f.head) || mentioned.count(f.tail);
      for (const Qualifier& q : f.qualifiers) {
        uses_few |= few_shot.count(q.attribute) > 0;
        mentions |= mentioned.count(q.value) > 0;
      }
      if (mentions && !uses_few) expected_bg.push_back(f);
    }
    EXPECT_EQ(ExtractBackgroundData(c.facts, few, few_shot), expected_bg);
  }
}

TEST(SplitTest, RoundingRule) {
  const std::array<double, 3> f{0.85, 0.05, 0.10};
  EXPECT_EQ(SplitSizes(118, f), (std::array<std::size_t, 3>{100, 6, 12}));
  EXPECT_EQ(SplitSizes(3, f), (std::array<std::size_t, 3>{1, 1, 1}));
  EXPECT_EQ(SplitSizes(20, f), (std::array<std::size_t, 3>{17, 1, 2}));
  EXPECT_EQ(ThrownClass([&] { SplitSizes(2, f); }), ErrorClass::kBuild);
}

TEST(SplitTest, PartitionIsDeterministicAndDisjoint) {
  std::set<RelationId> relations;
  for (int i = 0; i < 40; ++i) relations.insert(RelationId{i});
  BuildConfig config;
  config.rng_seed = 9;
  const TaskSplit a = SplitTasks(relations, config);
  const TaskSplit b = SplitTasks(relations, config);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.valid, b.valid);
  EXPECT_EQ(a.test, b.test);
  std::set<RelationId> all(a.train.begin(), a.train.end());
  all.insert(a.valid.begin(), a.valid.end());
  all.insert(a.test.begin(), a.test.end());
  EXPECT_EQ(all, relations);
  EXPECT_EQ(a.train.size() + a.valid.size() + a.test.size(), relations.size());
  config.rng_seed = 10;
  const TaskSplit c = SplitTasks(relations, config);
  EXPECT_NE(a.train, c.train);
}

TEST(CandidateTest, SmallClosure) {
  Vocabulary vocab;
  const EntityId a = vocab.AddEntity("A"), b = vocab.AddEntity("B"),
                 c = vocab.AddEntity("C"), d = vocab.AddEntity("D"),
                 x = vocab.AddEntity("X");
  const RelationId r = vocab.AddRelation("r"), s = vocab.AddRelation("s"),
                   u = vocab.AddRelation("u");
  const auto candidates = BuildCandidateSets(
      {{a, r, b, {}}}, {{x, s, b, {}}, {x, s, c, {}}, {x, u, d, {}}}, 1000);
  EXPECT_EQ(candidates.at(r), (std::vector<EntityId>{b, c}));
}

TEST(CandidateTest, CapKeepsHighestDegreeAndTrueTails) {
  Vocabulary vocab;
  std::vector<EntityId> e;
  for (int i = 0; i < 6; ++i) e.push_back(vocab.AddEntity("E" + std::to_string(i)));
  const RelationId r = vocab.AddRelation("r"), s = vocab.AddRelation("s");
  // e5 is r's only true tail; e1..e4 share its type through s. Degrees:
  // e4 and e3 are mentioned most.
  const std::vector<HyperFact> few{{e[0], r, e[5], {}}};
  const std::vector<HyperFact> bg{{e[0], s, e[5], {}}, {e[0], s, e[1], {}},
                                  {e[0], s, e[2], {}}, {e[0], s, e[3], {}},
                                  {e[0], s, e[4], {}}, {e[4], s, e[3], {}},
                                  {e[3], s, e[4], {}}, {e[2], s, e[4], {}}};
  EXPECT_EQ(BuildCandidateSets(few, bg, 2).at(r),
            (std::vector<EntityId>{e[3], e[4], e[5]}));
}

// Brute force over entity pairs: e is a candidate of r iff some relation has
// both e and one of r's tails among its tails.
TEST(CandidateTest, MatchesBruteForceClosure) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Corpus c = RandomCorpus(seed + 100, 20, 5, 60);
    const std::set<RelationId> few_shot{RelationId{0}, RelationId{1}};
    const auto few = ExtractFewShotData(c.facts, few_shot);
    const auto bg = ExtractBackgroundData(c.facts, few, few_shot);
    std::vector<HyperFact> all = few;
    all.insert(all.end(), bg.begin(), bg.end());
    auto is_tail_of = [&](EntityId e, RelationId rel) {
      for (const HyperFact& f : all) {
        if (f.relation == rel && f.tail == e) return true;
      }
      return false;
    };
    const auto candidates = BuildCandidateSets(few, bg, 1000);
    for (RelationId r : few_shot) {
      std::set<EntityId> tails;
      for (const HyperFact& f : few) {
        if (f.relation == r) tails.insert(f.tail);
      }
      if (tails.empty()) continue;
      std::vector<EntityId> expected;
      for (std::size_t i = 0; i < c.vocab.num_entities(); ++i) {
        const EntityId e{static_cast<std::int32_t>(i)};
        bool hit = tails.count(e) > 0;
        for (std::size_t k = 0; k < c.vocab.num_relations() && !hit; ++k) {
          const RelationId rel{static_cast<std::int32_t>(k)};
          if (!is_tail_of(e, rel)) continue;
          for (EntityId t : tails) hit |= is_tail_of(t, rel);
        }
        if (hit) expected.push_back(e);
      }
      EXPECT_EQ(candidates.at(r), expected) << "seed " << seed;
    }
  }
}

TEST(StatsTest, HyperRateAndCounts) {
  Vocabulary vocab;
  std::vector<HyperFact> facts;
  const RelationId p = vocab.AddRelation("p"), a = vocab.AddRelation("a");
  for (int i = 0; i < 10; ++i) {
    HyperFact f{vocab.AddEntity("h" + std::to_string(i)), p,
                vocab.AddEntity("t"), {}};
    if (i < 3) f.qualifiers.push_back({a, vocab.AddEntity("v" + std::to_string(i % 2))});
    facts.push_back(f);
  }
  const DatasetStats stats = ComputeStats(facts, {}, 1);
  EXPECT_DOUBLE_EQ(stats.few_shot_hyper_rate, 0.3);
  EXPECT_DOUBLE_EQ(stats.background_hyper_rate, 0.0);
  EXPECT_EQ(stats.num_entities, 13u);  // 10 heads, t, v0, v1
  EXPECT_EQ(stats.num_relations, 2u);
  EXPECT_EQ(stats.num_qualifier_values_few_shot, 2u);
  EXPECT_EQ(stats.num_qualifier_attributes_few_shot, 1u);
  EXPECT_EQ(stats.num_few_shot_facts, 10u);
}

TEST(BuildConfigTest, JsonRoundTripAndValidation) {
  BuildConfig config;
  config.min_instances = 7;
  config.rng_seed = 42;
  const BuildConfig back = BuildConfig::FromJson(config.ToJson());
  EXPECT_EQ(back.ToJson(), config.ToJson());
  EXPECT_EQ(ThrownClass([] { BuildConfig::FromJson({{"bogus", 1}}); }),
            ErrorClass::kConfig);
  EXPECT_EQ(ThrownClass([] { BuildConfig::FromJson({{"min_instances", 50}, {"max_instances", 10}}); }),
            ErrorClass::kConfig);
  EXPECT_EQ(ThrownClass([] {
              BuildConfig::FromJson({{"split_fractions", {0.5, 0.3, 0.3}}});
            }),
            ErrorClass::kConfig);
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(BuildDatasetTest, SyntheticBuildIsByteIdenticalAndLoadable) {
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(SyntheticConfig{});
  const auto dir = std::filesystem::temp_directory_path() / "metarh_dataset_test";
  std::filesystem::remove_all(dir);
  WriteDataset(BuildDataset(corpus.facts, corpus.vocab, BuildConfig{}), dir / "a");
  WriteDataset(BuildDataset(corpus.facts, corpus.vocab, BuildConfig{}), dir / "b");
  for (const char* name : {"background.jsonl", "tasks/train.json", "tasks/valid.json",
                           "tasks/test.json", "candidates.json", "stats.json",
                           "vocab.json"}) {
    const std::string a = Slurp(dir / "a" / name);
    EXPECT_FALSE(a.empty()) << name;
    EXPECT_EQ(a, Slurp(dir / "b" / name)) << name;
  }
  const KnowledgeStore store = KnowledgeStore::Load(dir / "a");
  EXPECT_EQ(store.tasks(Split::kTrain).size(), 17u);
  EXPECT_EQ(store.tasks(Split::kValid).size(), 1u);
  EXPECT_EQ(store.tasks(Split::kTest).size(), 2u);
  EXPECT_NO_THROW(AssertNoLeakage(store.background(), store.few_shot_relations(),
                                  store.vocab()));
  for (Split s : {Split::kTrain, Split::kValid, Split::kTest}) {
    for (const Task& task : store.tasks(s)) {
      const auto cands = store.Candidates(task.relation);
      for (const HyperFact& f : task.facts) {
        EXPECT_EQ(f.relation, task.relation);
        EXPECT_TRUE(std::binary_search(cands.begin(), cands.end(), f.tail));
      }
    }
  }
  std::filesystem::remove_all(dir);
}

TEST(SyntheticTest, TailIsDeterministicInHeadAndValue) {
  const SyntheticConfig config;
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(config);
  EXPECT_EQ(corpus.vocab.num_entities(), 60u);
  std::map<RelationId, std::set<std::pair<int, int>>> offsets;
  int few_shot = 0;
  for (const HyperFact& f : corpus.facts) {
    if (f.qualifiers.empty()) continue;
    ++few_shot;
    const LatticeCell h = SyntheticCell(config, corpus.vocab, f.head);
    const LatticeCell t = SyntheticCell(config, corpus.vocab, f.tail);
    const int v = static_cast<int>(Index(f.qualifiers[0].value)) - 56;
    ASSERT_GE(v, 0);
    offsets[f.relation].insert({t.x - h.x, t.y - h.y - v});
  }
  EXPECT_EQ(few_shot, config.num_relations * config.facts_per_relation);
  EXPECT_EQ(offsets.size(), std::size_t(config.num_relations));
  std::set<std::pair<int, int>> distinct;
  for (const auto& [r, o] : offsets) {
    EXPECT_EQ(o.size(), 1u);
    distinct.insert(*o.begin());
  }
  EXPECT_EQ(distinct.size(), offsets.size());
}

}  // namespace
}  // namespace metarh::dataset
