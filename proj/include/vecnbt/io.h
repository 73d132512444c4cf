// Copyright 2026 The vecnbt Authors
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

#ifndef VECNBT_IO_H_
#define VECNBT_IO_H_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "vecnbt/embed.h"
#include "vecnbt/graph.h"
#include "vecnbt/walks.h"

namespace vecnbt {

// Malformed input or an unreadable/unwritable file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Edge list: header "n m", then m lines "u v" with 0-based ids and u < v.
void WriteEdgeList(const Graph& g, std::ostream& out);
Graph ReadEdgeList(std::istream& in);

// One integer label per line.
void WriteLabels(const LabelVector& labels, std::ostream& out);
LabelVector ReadLabels(std::istream& in);

// One sentence per line, space-separated node ids.
void WriteCorpus(const WalkCorpus& corpus, std::ostream& out);
WalkCorpus ReadCorpus(std::istream& in);

// Header "n dim", then "node_id x1 ... xdim" for every trained row, floats in
// shortest round-trip form. Nodes without a row read back as untrained.
void WriteEmbedding(const EmbeddingMatrix& embedding, std::ostream& out);
EmbeddingMatrix ReadEmbedding(std::istream& in);

// Path helpers; throw FormatError when the file cannot be opened.
Graph ReadEdgeListFile(const std::filesystem::path& path);
void WriteEdgeListFile(const Graph& g, const std::filesystem::path& path);
LabelVector ReadLabelsFile(const std::filesystem::path& path);
void WriteLabelsFile(const LabelVector& labels,
                     const std::filesystem::path& path);
WalkCorpus ReadCorpusFile(const std::filesystem::path& path);
void WriteCorpusFile(const WalkCorpus& corpus,
                     const std::filesystem::path& path);
EmbeddingMatrix ReadEmbeddingFile(const std::filesystem::path& path);
void WriteEmbeddingFile(const EmbeddingMatrix& embedding,
                        const std::filesystem::path& path);

// Shortest decimal text that parses back to the same value.
std::string FormatDouble(double value);
std::string FormatFloat(float value);

}  // namespace vecnbt

#endif  // VECNBT_IO_H_
