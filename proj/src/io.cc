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

#include "vecnbt/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vecnbt {

namespace {

template <typename T>
std::string ShortestText(T value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw FormatError("cannot format number");
  return std::string(buf, end);
}

// Reads the next non-empty line; false at end of input.
bool NextLine(std::istream& in, std::string& line, int64_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void Fail(int64_t line_no, const std::string& what) {
  throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

template <typename T>
std::vector<T> ParseFields(const std::string& line, int64_t line_no) {
  std::istringstream fields(line);
  std::vector<T> out;
  T value;
  while (fields >> value) out.push_back(value);
  if (!fields.eof()) Fail(line_no, "unparseable field in '" + line + "'");
  return out;
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string() + " for reading");
  return in;
}

template <typename Writer>
void WriteFile(const std::filesystem::path& path, Writer write) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write(out);
  out.flush();
  if (!out) throw FormatError("write to " + path.string() + " failed");
}

}  // namespace

std::string FormatDouble(double value) { return ShortestText(value); }
std::string FormatFloat(float value) { return ShortestText(value); }

void WriteEdgeList(const Graph& g, std::ostream& out) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph ReadEdgeList(std::istream& in) {
  std::string line;
  int64_t line_no = 0;
  if (!NextLine(in, line, line_no)) throw FormatError("empty edge list");
  auto header = ParseFields<int64_t>(line, line_no);
  if (header.size() != 2 || header[0] < 0 || header[1] < 0) {
    Fail(line_no, "expected header 'n m'");
  }
  std::vector<Edge> edges;
  edges.reserve(header[1]);
  while (NextLine(in, line, line_no)) {
    auto f = ParseFields<int64_t>(line, line_no);
    if (f.size() != 2) Fail(line_no, "expected 'u v'");
    if (f[0] >= f[1]) Fail(line_no, "edge endpoints must satisfy u < v");
    edges.push_back({static_cast<NodeId>(f[0]), static_cast<NodeId>(f[1])});
  }
  if (static_cast<int64_t>(edges.size()) != header[1]) {
    throw FormatError("header declares " + std::to_string(header[1]) +
                      " edges, found " + std::to_string(edges.size()));
  }
  try {
    return Graph::FromEdges(static_cast<NodeId>(header[0]), edges);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void WriteLabels(const LabelVector& labels, std::ostream& out) {
  for (int32_t label : labels) out << label << '\n';
}

LabelVector ReadLabels(std::istream& in) {
  LabelVector labels;
  std::string line;
  int64_t line_no = 0;
  while (NextLine(in, line, line_no)) {
    auto f = ParseFields<int64_t>(line, line_no);
    if (f.size() != 1 || f[0] < 0) Fail(line_no, "expected one label >= 0");
    labels.push_back(static_cast<int32_t>(f[0]));
  }
  return labels;
}

void WriteCorpus(const WalkCorpus& corpus, std::ostream& out) {
  for (const Sentence& s : corpus.sentences) {
    for (size_t i = 0; i < s.size(); ++i) {
      if (i > 0) out << ' ';
      out << s[i];
    }
    out << '\n';
  }
}

WalkCorpus ReadCorpus(std::istream& in) {
  WalkCorpus corpus;
  std::string line;
  int64_t line_no = 0;
  while (NextLine(in, line, line_no)) {
    auto f = ParseFields<int64_t>(line, line_no);
    Sentence s;
    for (int64_t v : f) {
      if (v < 0) Fail(line_no, "negative node id");
      s.push_back(static_cast<NodeId>(v));
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

void WriteEmbedding(const EmbeddingMatrix& embedding, std::ostream& out) {
  out << embedding.rows() << ' ' << embedding.dim() << '\n';
  for (NodeId v = 0; v < embedding.rows(); ++v) {
    if (!embedding.trained(v)) continue;
    out << v;
    for (float x : embedding.row(v)) out << ' ' << FormatFloat(x);
    out << '\n';
  }
}

EmbeddingMatrix ReadEmbedding(std::istream& in) {
  std::string line;
  int64_t line_no = 0;
  if (!NextLine(in, line, line_no)) throw FormatError("empty embedding file");
  auto header = ParseFields<int64_t>(line, line_no);
  if (header.size() != 2 || header[0] < 0 || header[1] < 1) {
    Fail(line_no, "expected header 'n dim'");
  }
  EmbeddingMatrix embedding(static_cast<NodeId>(header[0]),
                            static_cast<int>(header[1]));
  while (NextLine(in, line, line_no)) {
    std::istringstream fields(line);
    int64_t id;
    if (!(fields >> id) || id < 0 || id >= embedding.rows()) {
      Fail(line_no, "bad node id");
    }
    if (embedding.trained(static_cast<NodeId>(id))) {
      Fail(line_no, "duplicate row for node " + std::to_string(id));
    }
    auto row = embedding.row(static_cast<NodeId>(id));
    std::string token;
    size_t i = 0;
    while (fields >> token) {
      if (i == row.size()) Fail(line_no, "too many components");
      auto [end, ec] =
          std::from_chars(token.data(), token.data() + token.size(), row[i]);
      if (ec != std::errc() || end != token.data() + token.size() ||
          !std::isfinite(row[i])) {
        Fail(line_no, "bad number '" + token + "'");
      }
      ++i;
    }
    if (i != row.size()) Fail(line_no, "too few components");
    embedding.set_trained(static_cast<NodeId>(id), true);
  }
  return embedding;
}

Graph ReadEdgeListFile(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadEdgeList(in);
}
void WriteEdgeListFile(const Graph& g, const std::filesystem::path& path) {
  WriteFile(path, [&](std::ostream& out) { WriteEdgeList(g, out); });
}
LabelVector ReadLabelsFile(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadLabels(in);
}
void WriteLabelsFile(const LabelVector& labels,
                     const std::filesystem::path& path) {
  WriteFile(path, [&](std::ostream& out) { WriteLabels(labels, out); });
}
WalkCorpus ReadCorpusFile(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadCorpus(in);
}
void WriteCorpusFile(const WalkCorpus& corpus,
                     const std::filesystem::path& path) {
  WriteFile(path, [&](std::ostream& out) { WriteCorpus(corpus, out); });
}
EmbeddingMatrix ReadEmbeddingFile(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadEmbedding(in);
}
void WriteEmbeddingFile(const EmbeddingMatrix& embedding,
                        const std::filesystem::path& path) {
  WriteFile(path, [&](std::ostream& out) { WriteEmbedding(embedding, out); });
}

}  // namespace vecnbt
