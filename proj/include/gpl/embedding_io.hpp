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


#pragma once

#include <filesystem>
#include <vector>

#include "gpl/matrix.hpp"
#include "gpl/unity_graph.hpp"

namespace gpl {

struct NodeEmbeddings {
  std::vector<NodeId> ids;
  Matrix vectors;  // ids.size() x dim

  friend bool operator==(const NodeEmbeddings&, const NodeEmbeddings&) = default;
};

// UGE1: magic | version u32 | N u32 | dim u32 | N x (video u32, clip u32) | N*dim f32.
std::vector<char> encode_embeddings(const NodeEmbeddings& emb);
NodeEmbeddings decode_embeddings(std::vector<char> bytes, const std::string& source);
void write_embeddings(const NodeEmbeddings& emb, const std::filesystem::path& path);
NodeEmbeddings load_embeddings(const std::filesystem::path& path);

}  // namespace gpl
