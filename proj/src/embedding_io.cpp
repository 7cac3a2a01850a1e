// Copyright 2026 The UnityGraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "gpl/embedding_io.hpp"

#include "binary_io.hpp"
#include "gpl/error.hpp"

namespace gpl {

namespace {
constexpr std::string_view kMagic = "UGE1";
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::vector<char> encode_embeddings(const NodeEmbeddings& emb) {
  if (emb.vectors.rows() != emb.ids.size()) {
    throw Error(ErrorCode::DimensionError, "embeddings: row count differs from id count");
  }
  detail::ByteWriter w;
  w.magic(kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(emb.ids.size()));
  w.u32(static_cast<std::uint32_t>(emb.vectors.cols()));
  for (const auto& id : emb.ids) {
    w.u32(id.video);
    w.u32(id.clip);
  }
  w.f32s(emb.vectors.data());
  return w.bytes();
}

NodeEmbeddings decode_embeddings(std::vector<char> bytes, const std::string& source) {
  detail::ByteReader r(std::move(bytes), source);
  r.expect_magic(kMagic);
  if (const auto v = r.u32("version"); v != kVersion) {
    throw Error(ErrorCode::FormatError, source + ": unsupported version " + std::to_string(v));
  }
  const auto n = r.u32("N");
  const auto dim = r.u32("dim");
  if (dim == 0) throw Error(ErrorCode::FormatError, source + ": dim must be >= 1");
  const std::uint64_t expected = std::uint64_t{n} * 8 + std::uint64_t{n} * dim * 4;
  if (r.remaining() != expected) {
    throw Error(ErrorCode::DimensionError,
                source + ": header says N=" + std::to_string(n) + ", dim=" +
                    std::to_string(dim) + " (" + std::to_string(expected) +
                    " bytes) but payload has " + std::to_string(r.remaining()));
  }
  NodeEmbeddings emb;
  emb.ids.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto video = r.u32("video");
    const auto clip = r.u32("clip");
    emb.ids.push_back({video, clip});
  }
  emb.vectors = Matrix(n, dim);
  r.f32s(emb.vectors.data(), "vectors");
  r.expect_end();
  return emb;
}

void write_embeddings(const NodeEmbeddings& emb, const std::filesystem::path& path) {
  detail::write_file(path, encode_embeddings(emb));
}

NodeEmbeddings load_embeddings(const std::filesystem::path& path) {
  return decode_embeddings(detail::read_file(path), path.string());
}

}  // namespace gpl
