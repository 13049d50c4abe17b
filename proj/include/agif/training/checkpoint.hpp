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

// Checkpoint directory layout:
//   manifest.json  parameter table (name, shape, byte offset), vocabulary,
//                  model and training configuration, dev metrics, epoch
//   weights.bin    row-major little-endian float32 tensors at the manifest
//                  offsets, concatenated without padding

#ifndef AGIF_TRAINING_CHECKPOINT_HPP_
#define AGIF_TRAINING_CHECKPOINT_HPP_

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "agif/corpus/vocab.hpp"
#include "agif/model/agif.hpp"
#include "agif/training/config.hpp"
#include "agif/training/serialization.hpp"

namespace agif::training {

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kWeightsFile = "weights.bin";
inline constexpr int kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TensorRecord {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  bool operator==(const TensorRecord&) const = default;
};

struct Checkpoint {
  model::ModelConfig model_config;
  TrainConfig train_config;
  corpus::Vocabulary vocab;
  Json dev_metrics = Json::object();
  std::size_t epoch = 0;
  std::vector<TensorRecord> tensors;
};

/// Copies (and narrows to float32) every named parameter.
template <typename T>
std::vector<TensorRecord> snapshot(const model::ModelParams<T>& params) {
  std::vector<TensorRecord> out;
  for (const auto& p : params.named()) {
    TensorRecord r{p.name, p.tensor.rows(), p.tensor.cols(), {}};
    r.data.reserve(p.tensor.size());
    for (T v : p.tensor.data()) r.data.push_back(static_cast<float>(v));
    out.push_back(std::move(r));
  }
  return out;
}

template <typename T>
Checkpoint make_checkpoint(const model::Model<T>& m, const TrainConfig& tc,
                           const corpus::Vocabulary& vocab, Json dev_metrics,
                           std::size_t epoch) {
  return {m.config, tc, vocab, std::move(dev_metrics), epoch, snapshot(m.params)};
}

namespace detail {

inline void put_le(std::string& blob, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) blob.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

inline float get_le(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return std::bit_cast<float>(bits);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("I/O error writing " + path.string());
}

}  // namespace detail

inline Json manifest_json(const Checkpoint& ck) {
  Json params = Json::array();
  std::size_t offset = 0;
  for (const auto& t : ck.tensors) {
    params.push_back(Json{{"name", t.name},
                          {"shape", {t.rows, t.cols}},
                          {"offset", offset},
                          {"bytes", t.data.size() * 4}});
    offset += t.data.size() * 4;
  }
  return Json{{"format", "agif-checkpoint"},
              {"version", kCheckpointVersion},
              {"dtype", "float32"},
              {"byte_order", "little"},
              {"weights_bytes", offset},
              {"parameters", params},
              {"vocab", to_json(ck.vocab)},
              {"model_config", to_json(ck.model_config)},
              {"train_config", to_json(ck.train_config)},
              {"dev_metrics", ck.dev_metrics},
              {"epoch", ck.epoch}};
}

inline std::string weights_blob(const Checkpoint& ck) {
  std::string blob;
  for (const auto& t : ck.tensors) {
    if (t.data.size() != t.rows * t.cols) {
      throw CheckpointError("tensor " + t.name + " has inconsistent size");
    }
    for (float v : t.data) detail::put_le(blob, v);
  }
  return blob;
}

inline void save_checkpoint(const Checkpoint& ck, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  detail::write_file(base / kWeightsFile, weights_blob(ck));
  detail::write_file(base / kManifestFile, manifest_json(ck).dump(2) + "\n");
}

/// Reads and validates a checkpoint: parameter names and shapes must match
/// those the stored model configuration produces, and the blob length must
/// equal the manifest total.
inline Checkpoint load_checkpoint(const std::string& dir) {
  const std::filesystem::path base(dir);
  Json m;
  try {
    m = Json::parse(detail::read_file(base / kManifestFile));
  } catch (const Json::exception& e) {
    throw CheckpointError(std::string("manifest is not valid JSON: ") + e.what());
  }
  Checkpoint ck;
  std::vector<Json> params;
  std::size_t expected_bytes = 0;
  try {
    if (m.at("format") != "agif-checkpoint" || m.at("version") != kCheckpointVersion) {
      throw CheckpointError("unsupported checkpoint format");
    }
    if (m.at("dtype") != "float32" || m.at("byte_order") != "little") {
      throw CheckpointError("unsupported dtype or byte order");
    }
    overlay(m.at("model_config"), ck.model_config);
    overlay(m.at("train_config"), ck.train_config);
    ck.vocab = vocab_from_json(m.at("vocab"));
    ck.dev_metrics = m.at("dev_metrics");
    ck.epoch = m.at("epoch").get<std::size_t>();
    expected_bytes = m.at("weights_bytes").get<std::size_t>();
    params = m.at("parameters").get<std::vector<Json>>();
  } catch (const Json::exception& e) {
    throw CheckpointError(std::string("malformed manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("malformed manifest: ") + e.what());
  }

  Rng shape_rng(0);
  const auto reference = model::init_params<float>(ck.model_config, shape_rng).named();
  if (reference.size() != params.size()) {
    throw CheckpointError("manifest lists " + std::to_string(params.size()) +
                          " parameters; the model config requires " +
                          std::to_string(reference.size()));
  }

  const std::string blob = detail::read_file(base / kWeightsFile);
  if (blob.size() != expected_bytes) {
    throw CheckpointError("weights.bin holds " + std::to_string(blob.size()) +
                          " bytes; manifest expects " + std::to_string(expected_bytes));
  }
  const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    TensorRecord t;
    std::size_t offset = 0, nbytes = 0;
    try {
      t.name = p.at("name").get<std::string>();
      const auto shape = p.at("shape").get<std::vector<std::size_t>>();
      if (shape.size() != 2) throw CheckpointError("tensor " + t.name + ": shape must be rank 2");
      t.rows = shape[0];
      t.cols = shape[1];
      offset = p.at("offset").get<std::size_t>();
      nbytes = p.at("bytes").get<std::size_t>();
    } catch (const Json::exception& e) {
      throw CheckpointError(std::string("malformed parameter entry: ") + e.what());
    }
    const auto& ref = reference[i];
    if (t.name != ref.name || t.rows != ref.tensor.rows() || t.cols != ref.tensor.cols()) {
      throw CheckpointError("parameter " + std::to_string(i) + " '" + t.name + "' [" +
                            std::to_string(t.rows) + "x" + std::to_string(t.cols) +
                            "] does not match model parameter '" + ref.name + "' " +
                            shape_string(ref.tensor.shape()));
    }
    if (offset != cursor || nbytes != t.rows * t.cols * 4) {
      throw CheckpointError("tensor " + t.name + ": offset or byte count is inconsistent");
    }
    t.data.resize(t.rows * t.cols);
    for (std::size_t k = 0; k < t.data.size(); ++k) {
      t.data[k] = detail::get_le(bytes + offset + 4 * k);
    }
    cursor += nbytes;
    ck.tensors.push_back(std::move(t));
  }
  return ck;
}

/// Rebuilds a model whose parameters hold the checkpoint values.
template <typename T>
model::Model<T> to_model(const Checkpoint& ck) {
  Rng rng(0);
  model::Model<T> m{ck.model_config, model::init_params<T>(ck.model_config, rng)};
  auto named = m.params.named();
  if (named.size() != ck.tensors.size()) throw CheckpointError("parameter count mismatch");
  for (std::size_t i = 0; i < named.size(); ++i) {
    const auto& rec = ck.tensors[i];
    auto dst = named[i].tensor.mutable_data();
    if (rec.name != named[i].name || rec.data.size() != dst.size()) {
      throw CheckpointError("parameter '" + rec.name + "' does not match the model");
    }
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = static_cast<T>(rec.data[k]);
  }
  return m;
}

}  // namespace agif::training

#endif  // AGIF_TRAINING_CHECKPOINT_HPP_
