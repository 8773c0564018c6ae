import json
import math

import pytest

import deephedge as dh


@pytest.fixture(scope="module")
def market():
    panel = dh.Panel.synthetic(json.dumps({"n_days": 1200, "seed": 3, "signal_strength": 0.5}))
    train, valid, test = panel.split("2007-12-31", "2008-12-31")
    return panel, train, valid, test, train.fit_norm_stats()


def test_panel_shape(market):
    panel, train, valid, test, stats = market
    assert len(panel) == len(train) + len(valid) + len(test)
    assert len(dh.FEATURE_NAMES) == 11
    assert panel.normalized(stats).shape == (len(panel), 11)
    assert len(stats.fingerprint()) == 16
    with pytest.raises(ValueError):
        panel.column("nope")


def test_env_reward_identity(market):
    _, train, _, _, stats = market
    cfg = {"window": 4, "episode_len": 40, "episode_stride": 40, "cost_bps": 10, "psi": 0.01}
    env = dh.HedgingEnv(train, stats, json.dumps(cfg))
    obs = env.reset(0)
    assert len(obs) == env.observation_dim == 4 * 11 + 1
    ret = train.column("ret_fwd")
    done, prev, t = False, 0.0, 0
    while not done:
        action = math.sin(t)
        obs, reward, done, info = env.step(action)
        trade = info["position"] - prev
        expected = 1e4 * (info["position"] * ret[info["row"]] - 1e-3 * abs(trade) - 0.005 * trade * trade)
        assert reward == pytest.approx(expected, abs=1e-12)
        prev, t = info["position"], t + 1
    assert obs is None
    with pytest.raises(RuntimeError):
        env.step(0.0)


def test_gae_and_metrics():
    adv, ret = dh.compute_gae([1.0, 2.0], [0.5, 0.25, 0.0], 0.9, 0.8)
    d1 = 2.0 - 0.25
    d0 = 1.0 + 0.9 * 0.25 - 0.5
    assert adv[1] == pytest.approx(d1)
    assert adv[0] == pytest.approx(d0 + 0.72 * d1)
    assert ret[0] == pytest.approx(adv[0] + 0.5)
    assert dh.sharpe([1.0, 1.0])[1] is True
    assert dh.max_drawdown([0.1, -0.5]) == pytest.approx(-0.5)
    x = [math.sin(i) for i in range(200)]
    a = dh.block_bootstrap_ci(x, 5, 100, 7)
    assert a == dh.block_bootstrap_ci(x, 5, 100, 7)


def test_train_and_evaluate(market, tmp_path):
    _, train, valid, test, stats = market
    env = json.dumps({"window": 5, "episode_len": 64, "episode_stride": 32})
    cfg = json.dumps({"updates_total": 40, "eval_every": 20, "hidden": 8, "seed": 2})
    ckpt = str(tmp_path / "best.ckpt")
    out = dh.train(train, valid, stats, env, cfg, ckpt)
    assert len(out["log"]) == 40
    assert out["best_update"] in (20, 40)
    again = dh.train(train, valid, stats, env, cfg)
    assert [r["actor_loss"] for r in again["log"]] == [r["actor_loss"] for r in out["log"]]
    rep = dh.evaluate_checkpoint(ckpt, test, stats)
    assert rep["steps"] == len(test) - 5
    other = dh.Panel.synthetic(json.dumps({"n_days": 1200, "seed": 4}))
    with pytest.raises(dh.IncompatibleError):
        dh.evaluate_checkpoint(ckpt, test, other.fit_norm_stats())
