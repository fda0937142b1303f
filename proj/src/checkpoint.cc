// Copyright 2026 The PhyloAdapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phyloadapt/checkpoint.h"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <memory>

#include "json.hpp"

namespace phyloadapt {
namespace {

constexpr std::string_view kMagic = "PHYLOADAPT-CKPT1\n";
constexpr int kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");
static_assert(sizeof(float) == 4);

nlohmann::json ConfigToJson(const ModelConfig& c) {
  return {{"vocab_size", c.vocab_size},     {"embed_dim", c.embed_dim},
          {"num_layers", c.num_layers},     {"num_heads", c.num_heads},
          {"ffn_dim", c.ffn_dim},           {"adapter_bottleneck", c.adapter_bottleneck},
          {"max_seq_len", c.max_seq_len},   {"num_classes", c.num_classes}};
}

ModelConfig ConfigFromJson(const nlohmann::json& j) {
  ModelConfig c;
  c.vocab_size = j.at("vocab_size").get<int>();
  c.embed_dim = j.at("embed_dim").get<int>();
  c.num_layers = j.at("num_layers").get<int>();
  c.num_heads = j.at("num_heads").get<int>();
  c.ffn_dim = j.at("ffn_dim").get<int>();
  c.adapter_bottleneck = j.at("adapter_bottleneck").get<int>();
  c.max_seq_len = j.at("max_seq_len").get<int>();
  c.num_classes = j.at("num_classes").get<int>();
  return c;
}

}  // namespace

void WriteCheckpoint(std::ostream& out, const EncoderModel& model) {
  nlohmann::json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["dtype"] = "float32";
  manifest["config"] = ConfigToJson(model.config());
  manifest["seed"] = model.seed();
  manifest["vocabulary"] = model.vocab().RegularWords();
  nlohmann::json adapters = nlohmann::json::array();
  for (const AdapterId& id : model.AdapterIds()) adapters.push_back(id.ToString());
  manifest["adapters"] = adapters;

  std::string blob;
  nlohmann::json tensors = nlohmann::json::array();
  model.VisitParameters([&](const std::string& name, const Matrix<float>& m) {
    tensors.push_back({{"name", name},
                       {"shape", {m.rows(), m.cols()}},
                       {"offset", blob.size()}});
    blob.append(reinterpret_cast<const char*>(m.data()),
                static_cast<std::size_t>(m.size()) * sizeof(float));
  });
  manifest["tensors"] = tensors;

  const std::string text = manifest.dump();
  const std::uint64_t length = text.size();
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  out.write(reinterpret_cast<const char*>(&length), sizeof(length));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

EncoderModel ReadCheckpoint(std::istream& in, std::string_view source_name) {
  const std::string where(source_name);
  std::string magic(kMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kMagic) throw DataError(where + ": not a checkpoint file");
  std::uint64_t length = 0;
  in.read(reinterpret_cast<char*>(&length), sizeof(length));
  if (!in || length > (std::uint64_t{1} << 32)) {
    throw DataError(where + ": corrupt manifest length");
  }
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw DataError(where + ": truncated manifest");
  const std::string blob((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());

  try {
    const nlohmann::json manifest = nlohmann::json::parse(text);
    if (manifest.at("format_version").get<int>() != kFormatVersion ||
        manifest.at("dtype").get<std::string>() != "float32") {
      throw DataError(where + ": unsupported checkpoint format");
    }
    const ModelConfig config = ConfigFromJson(manifest.at("config"));
    Vocabulary vocab(manifest.at("vocabulary").get<std::vector<std::string>>());
    std::vector<AdapterId> adapters;
    for (const auto& id : manifest.at("adapters")) {
      adapters.push_back(AdapterId::Parse(id.get<std::string>()));
    }
    std::map<std::string, Matrix<float>> tensors;
    for (const auto& entry : manifest.at("tensors")) {
      const auto rows = entry.at("shape").at(0).get<Eigen::Index>();
      const auto cols = entry.at("shape").at(1).get<Eigen::Index>();
      const auto offset = entry.at("offset").get<std::size_t>();
      if (rows < 0 || cols < 0) throw DataError(where + ": negative shape");
      const std::size_t bytes = static_cast<std::size_t>(rows * cols) * sizeof(float);
      if (offset > blob.size() || blob.size() - offset < bytes) {
        throw DataError(where + ": tensor data out of bounds");
      }
      Matrix<float> m(rows, cols);
      std::memcpy(m.data(), blob.data() + offset, bytes);
      tensors.emplace(entry.at("name").get<std::string>(), std::move(m));
    }
    return EncoderModel::FromParameters(config, std::move(vocab),
                                        manifest.at("seed").get<std::uint64_t>(),
                                        adapters, tensors);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(where + ": malformed manifest: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(where + ": invalid model config: " + e.what());
  }
}

void SaveCheckpoint(const std::filesystem::path& path, const EncoderModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  WriteCheckpoint(out, model);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

EncoderModel LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return ReadCheckpoint(in, path.string());
}

std::string Sha256Hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length,
                 EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::string ParameterDigest(
    const EncoderModel& model,
    const std::function<bool(const std::string&)>& include) {
  std::string bytes;
  model.VisitParameters([&](const std::string& name, const Matrix<float>& m) {
    if (!include(name)) return;
    bytes += name;
    bytes.push_back('\0');
    const std::array<std::int64_t, 2> shape = {m.rows(), m.cols()};
    bytes.append(reinterpret_cast<const char*>(shape.data()), sizeof(shape));
    bytes.append(reinterpret_cast<const char*>(m.data()),
                 static_cast<std::size_t>(m.size()) * sizeof(float));
  });
  return Sha256Hex(bytes);
}

std::string BackboneDigest(const EncoderModel& model) {
  return ParameterDigest(model, [](const std::string& name) {
    return name.starts_with("embeddings.") || name.starts_with("layers.");
  });
}

}  // namespace phyloadapt
