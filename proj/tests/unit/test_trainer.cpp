#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "deephedge/agent/checkpoint.hpp"
#include "deephedge/agent/trainer.hpp"
#include "deephedge/errors.hpp"
#include "test_support.hpp"

using namespace dhedge;
using namespace dhedge::agent;

namespace {

struct Bench {
  data::PanelSplits splits;
  data::NormStats stats;
  env::EnvConfig env;
  TrainConfig train;

  Bench() {
    const auto panel = testutil::small_synthetic(1200, 7, 0.5);
    splits = data::split_panel(panel, data::SplitSpec{Date{2007, 12, 31}, Date{2008, 12, 31}});
    stats = data::fit_norm_stats(splits.train);
    env.window = 5;
    env.episode_len = 64;
    env.episode_stride = 32;
    train.hidden = 16;
    train.updates_total = 120;
    train.eval_every = 50;
    train.seed = 3;
  }
};

std::string bytes(const Checkpoint& c) {
  std::ostringstream os;
  write_checkpoint(os, c);
  return os.str();
}

}  // namespace

TEST(TrainConfig, ScheduleAndValidation) {
  TrainConfig c;
  c.updates_total = 101;
  EXPECT_DOUBLE_EQ(c.lr_at(1), c.lr0);
  EXPECT_DOUBLE_EQ(c.lr_at(101), c.lr_min);
  EXPECT_NEAR(c.lr_at(51), 0.5 * (c.lr0 + c.lr_min), 1e-15);
  EXPECT_GT(c.lr_at(20), c.lr_at(21));
  c.gamma = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.gae_lambda = 1.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.grad_clip = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Train, DeterministicForFixedSeed) {
  const Bench s;
  const auto a = train(s.splits, s.stats, s.env, s.train);
  const auto b = train(s.splits, s.stats, s.env, s.train);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(format_train_log_row(a.log[i]), format_train_log_row(b.log[i]));
  }
  EXPECT_EQ(bytes(a.best), bytes(b.best));
  EXPECT_EQ(bytes(a.last), bytes(b.last));

  Bench other;
  other.train.seed = 4;
  const auto c = train(other.splits, other.stats, other.env, other.train);
  EXPECT_NE(bytes(a.last), bytes(c.last));
}

TEST(Train, EvaluationRowsAtMultiplesAndBestIsMax) {
  const Bench s;
  const auto r = train(s.splits, s.stats, s.env, s.train);
  ASSERT_EQ(r.log.size(), 120u);
  double best = -1e300;
  for (const auto& row : r.log) {
    const bool eval = !std::isnan(row.valid_sharpe);
    EXPECT_EQ(eval, row.update % 50 == 0) << row.update;
    EXPECT_EQ(row.status, "ok");
    if (eval) best = std::max(best, row.valid_sharpe);
  }
  EXPECT_EQ(r.best.valid_sharpe, best);
  EXPECT_EQ(r.last.update, 120);
  EXPECT_TRUE(r.best.update == 50 || r.best.update == 100);
  EXPECT_EQ(r.best.feature_fingerprint, data::fingerprint(s.stats));
}

TEST(Train, ResumeContinuesTheSameTrajectory) {
  Bench s;
  s.train.updates_total = 160;
  const auto full = train(s.splits, s.stats, s.env, s.train);
  // Resume from the best checkpoint after a byte round-trip.
  std::istringstream in(bytes(full.best));
  const Checkpoint mid = read_checkpoint(in);
  const auto k = static_cast<std::size_t>(mid.update);
  ASSERT_TRUE(k == 50 || k == 100 || k == 150);
  const auto resumed = train(s.splits, s.stats, s.env, s.train, &mid);
  ASSERT_EQ(resumed.log.front().update, mid.update + 1);
  ASSERT_EQ(resumed.log.size(), 160u - k);
  for (std::size_t i = 0; i < resumed.log.size(); ++i) {
    EXPECT_EQ(format_train_log_row(resumed.log[i]), format_train_log_row(full.log[i + k]));
  }
  EXPECT_EQ(resumed.last.params, full.last.params);
}

TEST(Train, ResumeRefusesMismatchedFingerprints) {
  Bench s;
  s.train.updates_total = 60;
  const auto r = train(s.splits, s.stats, s.env, s.train);
  env::EnvConfig changed = s.env;
  changed.cost_bps = 20;
  EXPECT_THROW(train(s.splits, s.stats, changed, s.train, &r.last), IncompatibleError);
  data::NormStats other = s.stats;
  other.mean[0] += 1.0;
  EXPECT_THROW(train(s.splits, other, s.env, s.train, &r.last), IncompatibleError);
}

TEST(Train, HugeEntropyDrivesStdUp) {
  Bench s;
  s.train.updates_total = 250;
  s.train.lr0 = 0.05;
  s.train.lr_min = 0.05;
  s.train.entropy_coef = 10.0;
  const auto hi = train(s.splits, s.stats, s.env, s.train);
  EXPECT_GT(hi.last.params.log_std, 1.9);
  s.train.entropy_coef = 0.0;
  const auto lo = train(s.splits, s.stats, s.env, s.train);
  EXPECT_LT(lo.last.params.log_std, hi.last.params.log_std);
}

TEST(Train, ShortSplitsAreRejected) {
  Bench s;
  s.env.episode_len = 5000;
  EXPECT_THROW(train(s.splits, s.stats, s.env, s.train), InsufficientDataError);
}

TEST(Train, EvaluatesAtLastUpdateWhenCadenceNeverFires) {
  Bench s;
  s.train.updates_total = 20;
  const auto r = train(s.splits, s.stats, s.env, s.train);
  EXPECT_FALSE(std::isnan(r.log.back().valid_sharpe));
  EXPECT_EQ(r.best.update, 20);
}
