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

#ifndef PHYLOADAPT_CHECKPOINT_H_
#define PHYLOADAPT_CHECKPOINT_H_

#include <filesystem>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "phyloadapt/model.h"

namespace phyloadapt {

// Checkpoint layout:
//   "PHYLOADAPT-CKPT1\n"           16-byte magic
//   uint64 little-endian           manifest length in bytes
//   manifest                       UTF-8 JSON: format version, model config,
//                                  seed, regular vocabulary words, adapter
//                                  ids, and one {name, shape, offset} entry
//                                  per tensor
//   tensor data                    row-major little-endian float32, at the
//                                  manifest offsets relative to this point
void WriteCheckpoint(std::ostream& out, const EncoderModel& model);
EncoderModel ReadCheckpoint(std::istream& in,
                            std::string_view source_name = "<stream>");
void SaveCheckpoint(const std::filesystem::path& path, const EncoderModel& model);
EncoderModel LoadCheckpoint(const std::filesystem::path& path);

std::string Sha256Hex(std::string_view bytes);

// SHA-256 over name, shape and raw values of every parameter for which
// `include` returns true, in VisitParameters order.
std::string ParameterDigest(
    const EncoderModel& model,
    const std::function<bool(const std::string&)>& include);
std::string BackboneDigest(const EncoderModel& model);

}  // namespace phyloadapt

#endif  // PHYLOADAPT_CHECKPOINT_H_
