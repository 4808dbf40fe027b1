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

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

#include "affect/model_io.hpp"
#include "synthetic.hpp"

using namespace affect;

namespace {

MultiOutputModel trained_model(std::size_t trees = 6) {
  const auto set = testing::to_training_set(testing::make_frames(300, 31));
  ForestParams p;
  p.n_trees = trees;
  p.master_seed = 5;
  p.tree.max_depth = 12;
  p.tree.max_features = MaxFeatures::sqrt();
  return fit_multioutput(set, p);
}

MultiOutputModel trivial_model() {
  MultiOutputModel m;
  m.feature_order_checksum = feature_order_checksum();
  for (Target t : {Target::Valence, Target::Arousal}) {
    Forest f;
    f.target = t;
    f.params.n_trees = 1;
    f.trees.emplace_back(std::vector<TreeNode>{TreeNode::leaf(0.0, 1)});
    (t == Target::Valence ? m.valence : m.arousal) = f;
  }
  return m;
}

Bytes read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& p, const Bytes& b) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

ModelIoError::Kind decode_error(const Bytes& b) {
  try {
    decode_model(b);
  } catch (const ModelIoError& e) {
    return e.kind();
  }
  FAIL("decode unexpectedly succeeded");
  return ModelIoError::Kind::IoFailure;
}

}  // namespace

TEST_CASE("save is deterministic and load/save is a fixpoint") {
  const auto dir = testing::scratch_dir("model-io");
  const auto m = trained_model();
  save_model(m, dir / "a.bin");
  save_model(m, dir / "b.bin");
  CHECK(read_file(dir / "a.bin") == read_file(dir / "b.bin"));

  const auto loaded = load_model(dir / "a.bin");
  CHECK(loaded == m);
  save_model(loaded, dir / "c.bin");
  CHECK(read_file(dir / "c.bin") == read_file(dir / "a.bin"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("round trip preserves predictions bit-exactly") {
  const auto m = trained_model();
  const auto loaded = decode_model(encode_model(m));
  std::mt19937_64 rng(77);
  for (int i = 0; i < 1000; ++i) {
    const auto x = testing::random_features(rng);
    const auto a = predict_multioutput(m, x), b = predict_multioutput(loaded, x);
    REQUIRE(std::bit_cast<std::uint64_t>(a.valence) == std::bit_cast<std::uint64_t>(b.valence));
    REQUIRE(std::bit_cast<std::uint64_t>(a.arousal) == std::bit_cast<std::uint64_t>(b.arousal));
  }
}

TEST_CASE("special doubles survive the round trip") {
  auto m = trivial_model();
  m.valence.trees[0] = RegressionTree({TreeNode::internal(3, -0.0, 1, 2), TreeNode::leaf(5e-324, 1),
                                       TreeNode::leaf(1.7976931348623157e308, 2)});
  const auto back = decode_model(encode_model(m));
  CHECK(back == m);
  CHECK(std::signbit(back.valence.trees[0].root().threshold));
}

TEST_CASE("trivial model") {
  const auto m = trivial_model();
  const auto bytes = encode_model(m);
  CHECK(std::memcmp(bytes.data(), kModelMagic, 8) == 0);
  const auto back = decode_model(bytes);
  CHECK(predict_multioutput(back, FeatureVector()) == AffectPrediction{0.0, 0.0});
}

TEST_CASE("header layout is little-endian") {
  auto m = trivial_model();
  m.master_seed = 0x0102030405060708ULL;
  const auto b = encode_model(m);
  // magic(8) version(4) scheme(4) checksum(8) n_features(4) master_seed(8)
  CHECK(b[8] == kModelFormatVersion);
  CHECK(b[9] == 0);
  CHECK(b[24] == 48);
  CHECK(b[28] == 0x08);
  CHECK(b[35] == 0x01);
  std::uint64_t checksum = 0;
  for (int i = 0; i < 8; ++i) checksum |= std::uint64_t(b[16 + i]) << (8 * i);
  CHECK(checksum == feature_order_checksum());
}

TEST_CASE("rejected inputs") {
  const auto good = encode_model(trained_model(2));

  SUBCASE("every truncation is rejected") {
    for (std::size_t len = 0; len < good.size(); ++len) {
      const Bytes cut(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(len));
      const auto kind = decode_error(cut);
      REQUIRE((kind == ModelIoError::Kind::CorruptTree || kind == ModelIoError::Kind::BadMagic));
    }
  }
  SUBCASE("bad magic") {
    auto b = good;
    b[0] = 'X';
    CHECK(decode_error(b) == ModelIoError::Kind::BadMagic);
  }
  SUBCASE("unknown version") {
    auto b = good;
    b[8] = 2;
    CHECK(decode_error(b) == ModelIoError::Kind::UnsupportedVersion);
  }
  SUBCASE("trailing garbage") {
    auto b = good;
    b.push_back(0);
    CHECK(decode_error(b) == ModelIoError::Kind::CorruptTree);
  }
  SUBCASE("flipped payload byte") {
    auto b = good;
    b[b.size() / 2] ^= 0x40;
    CHECK(decode_error(b) == ModelIoError::Kind::CorruptTree);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_model("/nonexistent/model.bin"), ModelIoError);
  }
}

TEST_CASE("dangling child index is CorruptTree") {
  // Encoding a hand-built bad tree requires bypassing RegressionTree's checks,
  // so patch the right-child field of the root in a valid encoding instead.
  auto m = trivial_model();
  m.valence.trees[0] =
      RegressionTree({TreeNode::internal(0, 0.5, 1, 2), TreeNode::leaf(1.0, 1), TreeNode::leaf(2.0, 1)});
  auto b = encode_model(m);
  // header(36) + forest params(1+8+1+8+8+8+8+1+8+8 = 59) + n_nodes(8) + tag(1) feature(4) threshold(8) left(4)
  const std::size_t right_at = 36 + 59 + 8 + 1 + 4 + 8 + 4;
  REQUIRE(b[right_at] == 2);
  b[right_at] = 9;
  // Refresh the trailing checksum so only the structural check can object.
  const std::size_t body = b.size() - 16;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < body; ++i) {
    h ^= b[i];
    h *= 0x100000001b3ULL;
  }
  for (int i = 0; i < 8; ++i) b[body + i] = static_cast<std::uint8_t>(h >> (8 * i));
  CHECK(decode_error(b) == ModelIoError::Kind::CorruptTree);
}

TEST_CASE("foreign feature order loads but refuses to predict") {
  auto b = encode_model(trivial_model());
  b[16] ^= 0xFF;
  const std::size_t body = b.size() - 16;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < body; ++i) {
    h ^= b[i];
    h *= 0x100000001b3ULL;
  }
  for (int i = 0; i < 8; ++i) b[body + i] = static_cast<std::uint8_t>(h >> (8 * i));
  const auto m = decode_model(b);
  CHECK(m.feature_order_checksum != feature_order_checksum());
  CHECK_THROWS_AS(predict_multioutput(m, FeatureVector()), ChecksumMismatch);
}
