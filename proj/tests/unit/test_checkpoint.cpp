#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "deephedge/agent/checkpoint.hpp"
#include "deephedge/errors.hpp"
#include "test_support.hpp"

using namespace dhedge;
using namespace dhedge::agent;

namespace {

Checkpoint random_checkpoint(bool with_adam) {
  Rng rng = make_rng(9, 0);
  Checkpoint c;
  c.params = PolicyParams::init(3 * 11 + 1, 8, -0.5, rng);
  c.params.b1.setRandom();
  c.update = 150;
  c.valid_sharpe = 0.1 + 1e-17;
  c.train_sharpe = kMissing;
  c.env.window = 3;
  c.train.seed = 77;
  c.train.hidden = 8;
  c.feature_fingerprint = "00aa";
  c.env_fingerprint = env::fingerprint(c.env);
  if (with_adam) {
    AdamState a;
    a.m = Eigen::VectorXd::Random(c.params.num_params());
    a.v = Eigen::VectorXd::Random(c.params.num_params()).cwiseAbs();
    a.step = 150;
    c.adam = a;
  }
  return c;
}

std::string bytes(const Checkpoint& c) {
  std::ostringstream os;
  write_checkpoint(os, c);
  return os.str();
}

}  // namespace

TEST(Checkpoint, RoundTripIsBitExact) {
  for (bool adam : {false, true}) {
    const Checkpoint c = random_checkpoint(adam);
    const std::string b = bytes(c);
    std::istringstream in(b);
    const Checkpoint back = read_checkpoint(in);
    EXPECT_TRUE(back == c);
    EXPECT_EQ(back.params.flatten(), c.params.flatten());
    EXPECT_EQ(bytes(back), b);
  }
}

TEST(Checkpoint, SaveAndLoadFile) {
  const auto dir = testutil::fresh_dir("ckpt");
  const Checkpoint c = random_checkpoint(true);
  save_checkpoint(dir / "a" / "x.ckpt", c);
  EXPECT_TRUE(load_checkpoint(dir / "a" / "x.ckpt") == c);
  EXPECT_THROW(load_checkpoint(dir / "missing.ckpt"), ValidationError);
}

TEST(Checkpoint, TruncatedAndCorruptFilesFail) {
  const std::string b = bytes(random_checkpoint(true));
  for (std::size_t cut : {std::size_t{4}, std::size_t{12}, b.size() / 2, b.size() - 1}) {
    std::istringstream in(b.substr(0, cut));
    EXPECT_THROW(read_checkpoint(in), ValidationError) << cut;
  }
  std::string bad = b;
  bad[0] = 'X';
  std::istringstream in(bad);
  EXPECT_THROW(read_checkpoint(in), ValidationError);
  std::istringstream extra(b + "junk");
  EXPECT_THROW(read_checkpoint(extra), ValidationError);
}

TEST(Checkpoint, ManifestIsReadableJson) {
  const std::string b = bytes(random_checkpoint(false));
  std::uint64_t len = 0;
  std::memcpy(&len, b.data() + 8, 8);
  const std::string manifest = b.substr(16, len);
  EXPECT_NE(manifest.find("\"tensors\""), std::string::npos);
  EXPECT_NE(manifest.find("\"seed\": 77"), std::string::npos);
  EXPECT_NE(manifest.find("\"feature_fingerprint\""), std::string::npos);
  EXPECT_EQ(b.size(), 16 + len + 8 * static_cast<std::size_t>(random_checkpoint(false).params.num_params()));
}

TEST(Checkpoint, DifferentFeatureSetIsRefused) {
  const auto panel = testutil::small_synthetic(400);
  const auto stats = data::fit_norm_stats(panel);
  Checkpoint c = random_checkpoint(false);
  c.feature_fingerprint = data::fingerprint(stats);
  env::EnvConfig e;
  e.window = 3;
  EXPECT_NO_THROW(check_compatible(c, stats, e));

  // A net trained on 10 features per row has a different input width and fingerprint.
  Rng rng = make_rng(1, 1);
  Checkpoint fewer = c;
  fewer.params = PolicyParams::init(3 * 10 + 1, 8, -0.5, rng);
  fewer.feature_fingerprint = hex64(fnv1a64("features:ten"));
  EXPECT_THROW(check_compatible(fewer, stats, e), IncompatibleError);
  fewer.feature_fingerprint = c.feature_fingerprint;
  EXPECT_THROW(check_compatible(fewer, stats, e), IncompatibleError);
}
