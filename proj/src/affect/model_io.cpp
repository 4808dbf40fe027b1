/*
   Copyright 2026 The affectrf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "affect/model_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace affect {

namespace {

constexpr std::uint8_t kLeafTag = 0;
constexpr std::uint8_t kInternalTag = 1;
constexpr std::size_t kMinNodeBytes = 1 + 8 + 8;

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
public:
  explicit Writer(Bytes& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char (&tag)[8]) { out_.insert(out_.end(), tag, tag + 8); }

private:
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes& out_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  bool tag_matches(const char (&tag)[8]) {
    need(8);
    const bool ok = std::memcmp(in_.data() + pos_, tag, 8) == 0;
    pos_ += 8;
    return ok;
  }
  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }

private:
  void need(std::size_t n) const {
    if (remaining() < n) throw ModelIoError(ModelIoError::Kind::CorruptTree, "model file is truncated");
  }
  std::uint64_t le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

[[noreturn]] void corrupt(const std::string& what) { throw ModelIoError(ModelIoError::Kind::CorruptTree, what); }

void write_forest(Writer& w, const Forest& f) {
  const auto& p = f.params;
  w.u8(static_cast<std::uint8_t>(f.target));
  w.u64(p.n_trees);
  w.u8(p.bootstrap ? 1 : 0);
  w.u64(p.master_seed);
  w.u64(p.tree.max_depth.value_or(0));
  w.u64(p.tree.min_samples_split);
  w.u64(p.tree.min_samples_leaf);
  w.u8(static_cast<std::uint8_t>(p.tree.max_features.mode));
  w.u64(p.tree.max_features.k);
  w.u64(p.tree.seed);
  for (const auto& tree : f.trees) {
    w.u64(tree.nodes().size());
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf) {
        w.u8(kLeafTag);
        w.f64(node.value);
        w.u64(node.n_samples);
      } else {
        w.u8(kInternalTag);
        w.u32(node.feature);
        w.f64(node.threshold);
        w.u32(node.left);
        w.u32(node.right);
      }
    }
  }
}

Forest read_forest(Reader& r, std::uint32_t n_features) {
  Forest f;
  const auto target = r.u8();
  if (target > 1) corrupt("unknown target tag " + std::to_string(target));
  f.target = static_cast<Target>(target);

  auto& p = f.params;
  p.n_trees = r.u64();
  const auto bootstrap = r.u8();
  if (bootstrap > 1) corrupt("bad bootstrap flag");
  p.bootstrap = bootstrap == 1;
  p.master_seed = r.u64();
  const auto depth = r.u64();
  if (depth != 0) p.tree.max_depth = depth;
  p.tree.min_samples_split = r.u64();
  p.tree.min_samples_leaf = r.u64();
  const auto mode = r.u8();
  if (mode > 3) corrupt("unknown max_features mode");
  p.tree.max_features.mode = static_cast<MaxFeatures::Mode>(mode);
  p.tree.max_features.k = r.u64();
  p.tree.seed = r.u64();

  if (p.n_trees == 0) corrupt("forest has no trees");
  if (p.n_trees > r.remaining() / (8 + kMinNodeBytes)) corrupt("tree count exceeds file size");
  f.trees.reserve(p.n_trees);
  for (std::size_t t = 0; t < p.n_trees; ++t) {
    const auto n_nodes = r.u64();
    if (n_nodes == 0 || n_nodes > r.remaining() / kMinNodeBytes || n_nodes > UINT32_MAX) {
      corrupt("bad node count in tree " + std::to_string(t));
    }
    std::vector<TreeNode> nodes;
    nodes.reserve(n_nodes);
    for (std::uint64_t i = 0; i < n_nodes; ++i) {
      const auto tag = r.u8();
      if (tag == kLeafTag) {
        const double value = r.f64();
        nodes.push_back(TreeNode::leaf(value, r.u64()));
      } else if (tag == kInternalTag) {
        const auto feature = r.u32();
        const double threshold = r.f64();
        const auto left = r.u32();
        const auto right = r.u32();
        if (feature >= n_features) corrupt("split feature out of range");
        nodes.push_back(TreeNode::internal(feature, threshold, left, right));
      } else {
        corrupt("unknown node tag");
      }
    }
    try {
      f.trees.emplace_back(std::move(nodes));
    } catch (const CorruptTreeError& e) {
      corrupt(std::string("tree ") + std::to_string(t) + ": " + e.what());
    }
  }
  return f;
}

}  // namespace

Bytes encode_forest(const Forest& f) {
  Bytes out;
  Writer w(out);
  write_forest(w, f);
  return out;
}

Bytes encode_model(const MultiOutputModel& m) {
  Bytes out;
  Writer w(out);
  w.raw(kModelMagic);
  w.u32(kModelFormatVersion);
  w.u32(kSeedSchemeId);
  w.u64(m.feature_order_checksum);
  w.u32(static_cast<std::uint32_t>(kFeatureCount));
  w.u64(m.master_seed);
  write_forest(w, m.valence);
  write_forest(w, m.arousal);
  w.u64(fnv1a(out));
  w.raw(kModelTrailer);
  return out;
}

MultiOutputModel decode_model(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (bytes.size() < sizeof kModelMagic || !r.tag_matches(kModelMagic)) {
    throw ModelIoError(ModelIoError::Kind::BadMagic, "not a model file (bad magic)");
  }
  const auto version = r.u32();
  if (version != kModelFormatVersion) {
    throw ModelIoError(ModelIoError::Kind::UnsupportedVersion,
                       "unsupported model format version " + std::to_string(version));
  }
  const auto scheme = r.u32();
  if (scheme != kSeedSchemeId) {
    throw ModelIoError(ModelIoError::Kind::UnsupportedVersion, "unsupported seed scheme " + std::to_string(scheme));
  }
  MultiOutputModel m;
  m.feature_order_checksum = r.u64();
  const auto n_features = r.u32();
  if (n_features != kFeatureCount) corrupt("model expects " + std::to_string(n_features) + " features");
  m.master_seed = r.u64();
  m.valence = read_forest(r, n_features);
  m.arousal = read_forest(r, n_features);
  if (m.valence.target != Target::Valence || m.arousal.target != Target::Arousal) corrupt("forest targets swapped");

  const std::size_t body = r.position();
  if (r.u64() != fnv1a(bytes.first(body))) corrupt("model checksum mismatch");
  if (!r.tag_matches(kModelTrailer)) corrupt("missing trailer");
  if (r.remaining() != 0) corrupt("trailing bytes after model");
  return m;
}

void save_model(const MultiOutputModel& m, const std::filesystem::path& path) {
  const auto bytes = encode_model(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelIoError(ModelIoError::Kind::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw ModelIoError(ModelIoError::Kind::IoFailure, "failed writing " + path.string());
}

MultiOutputModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError(ModelIoError::Kind::IoFailure, "cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw ModelIoError(ModelIoError::Kind::IoFailure, "failed reading " + path.string());
  return decode_model(bytes);
}

}  // namespace affect
