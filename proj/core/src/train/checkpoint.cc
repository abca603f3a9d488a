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

#include "metarh/train/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>

#include "metarh/common/error.h"
#include "metarh/common/hashing.h"

namespace metarh::train {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[4] = {'M', 'R', 'H', '1'};

class Writer {
 public:
  template <typename T>
  void Put(T value) {
    const auto* p = reinterpret_cast<const unsigned char*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void PutBytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  void PutString(const std::string& s) {
    Put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    PutBytes(s.data(), s.size());
  }
  void PutMatrix(const std::string& name, const ad::Matrix& m) {
    PutString(name);
    Put<std::uint32_t>(static_cast<std::uint32_t>(m.rows()));
    Put<std::uint32_t>(static_cast<std::uint32_t>(m.cols()));
    PutBytes(m.data(), sizeof(double) * m.size());
  }
  std::vector<unsigned char>& bytes() { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}
  template <typename T>
  T Get() {
    T value;
    Need(sizeof(T));
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string GetString() {
    const std::uint32_t n = Get<std::uint32_t>();
    Need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  ad::Matrix GetMatrix() {
    const std::uint32_t rows = Get<std::uint32_t>();
    const std::uint32_t cols = Get<std::uint32_t>();
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    Need(n * sizeof(double));
    ad::Matrix m(rows, cols);
    std::memcpy(m.data(), bytes_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
    return m;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorClass::kLoad, "checkpoint truncated");
    }
  }
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void SaveCheckpoint(const std::filesystem::path& path,
                    const model::MetaRHModel& model, const TrainConfig& config,
                    std::uint64_t vocab_hash, std::int64_t step) {
  const model::Parameters& params = model.params();
  Writer w;
  w.PutBytes(kMagic, sizeof(kMagic));
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(model.config().dim));
  w.Put<std::uint64_t>(params.entities.size());
  w.Put<std::uint64_t>(params.relations.size());
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(model.config().gran_layers));
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(model.config().gran_heads));
  w.Put<std::uint64_t>(vocab_hash);
  w.Put<std::int64_t>(step);
  TrainConfig saved = config;
  saved.model = model.config();
  w.PutString(saved.ToJson().dump());

  std::vector<model::NamedTensor> dense = params.DenseTensors();
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(dense.size() + 2));
  w.PutMatrix("entities", params.entities.ToMatrix());
  w.PutMatrix("relations", params.relations.ToMatrix());
  for (const model::NamedTensor& t : dense) w.PutMatrix(t.name, t.var.value());
  w.Put<std::uint32_t>(Crc32(w.bytes()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorClass::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(w.bytes().data()),
            static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw Error(ErrorClass::kIo, "write failed: " + path.string());
}

CheckpointContents ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorClass::kLoad, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kMagic) + sizeof(std::uint32_t) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorClass::kLoad, "not a checkpoint: " + path.string());
  }
  const std::size_t body = bytes.size() - sizeof(std::uint32_t);
  std::uint32_t stored = 0;
  std::memcpy(&stored, bytes.data() + body, sizeof(stored));
  if (Crc32(std::span<const unsigned char>(bytes.data(), body)) != stored) {
    throw Error(ErrorClass::kChecksum, "checkpoint checksum mismatch");
  }

  Reader r(std::span<const unsigned char>(bytes.data() + sizeof(kMagic),
                                          body - sizeof(kMagic)));
  CheckpointContents c;
  c.header.dim = r.Get<std::uint32_t>();
  c.header.num_entities = r.Get<std::uint64_t>();
  c.header.num_relations = r.Get<std::uint64_t>();
  c.header.gran_layers = r.Get<std::uint32_t>();
  c.header.gran_heads = r.Get<std::uint32_t>();
  c.header.vocab_hash = r.Get<std::uint64_t>();
  c.step = r.Get<std::int64_t>();
  try {
    c.config = TrainConfig::FromJson(nlohmann::json::parse(r.GetString()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorClass::kLoad, std::string("checkpoint config: ") + e.what());
  }
  const std::uint32_t blocks = r.Get<std::uint32_t>();
  for (std::uint32_t i = 0; i < blocks; ++i) {
    NamedMatrix t;
    t.name = r.GetString();
    t.value = r.GetMatrix();
    c.tensors.push_back(std::move(t));
  }
  if (!r.done()) throw Error(ErrorClass::kLoad, "trailing bytes in checkpoint");
  return c;
}

LoadedModel LoadCheckpoint(const std::filesystem::path& path,
                           std::uint64_t expected_vocab_hash) {
  CheckpointContents c = ReadCheckpoint(path);
  if (c.header.vocab_hash != expected_vocab_hash) {
    throw Error(ErrorClass::kLoad,
                "checkpoint was trained on a different vocabulary");
  }
  const model::ModelConfig& mc = c.config.model;
  if (c.header.dim != static_cast<std::uint32_t>(mc.dim) ||
      c.header.gran_layers != static_cast<std::uint32_t>(mc.gran_layers) ||
      c.header.gran_heads != static_cast<std::uint32_t>(mc.gran_heads)) {
    throw Error(ErrorClass::kLoad, "checkpoint header disagrees with its config");
  }
  LoadedModel loaded;
  loaded.config = c.config;
  loaded.step = c.step;
  loaded.model = std::make_unique<model::MetaRHModel>(
      mc, c.header.num_entities, c.header.num_relations, c.config.seed);

  std::map<std::string, const ad::Matrix*> by_name;
  for (const NamedMatrix& t : c.tensors) by_name[t.name] = &t.value;
  auto fetch = [&](const std::string& name, Eigen::Index rows,
                   Eigen::Index cols) -> const ad::Matrix& {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw Error(ErrorClass::kLoad, "checkpoint lacks tensor '" + name + "'");
    }
    if (it->second->rows() != rows || it->second->cols() != cols) {
      throw Error(ErrorClass::kLoad, "tensor '" + name + "' has the wrong shape");
    }
    return *it->second;
  };
  model::Parameters& params = loaded.model->params();
  params.entities.AssignFromMatrix(
      fetch("entities", params.entities.size(), mc.dim));
  params.relations.AssignFromMatrix(
      fetch("relations", params.relations.size(), mc.dim));
  std::vector<model::NamedTensor> dense = params.DenseTensors();
  for (model::NamedTensor& t : dense) {
    t.var.mutable_leaf_value() = fetch(t.name, t.var.rows(), t.var.cols());
  }
  if (by_name.size() != dense.size() + 2) {
    throw Error(ErrorClass::kLoad, "checkpoint holds unexpected tensors");
  }
  return loaded;
}

}  // namespace metarh::train
