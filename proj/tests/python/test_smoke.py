"""End-to-end smoke tests for the python bindings.

Numeric expectations are computed in-test from first principles; training
calls are sized to keep the whole file under a minute.
"""

import json
import math

import pytest

import demoguide


def test_version():
    assert demoguide.__version__ == "0.1.0"


def test_gae_matches_hand_recursion():
    rewards = [1.0, 0.5, -0.25, 2.0]
    values = [0.1, -0.2, 0.3, 0.0]
    dones = [False, False, True, False]
    gamma, lam, last = 0.9, 0.8, 0.7

    deltas = []
    for t in range(4):
        vnext = values[t + 1] if t + 1 < 4 else last
        deltas.append(rewards[t] + gamma * vnext * (0.0 if dones[t] else 1.0) - values[t])
    expected = [0.0] * 4
    running = 0.0
    for t in reversed(range(4)):
        running = deltas[t] + gamma * lam * (0.0 if dones[t] else 1.0) * running
        expected[t] = running

    got = demoguide.gae(rewards, values, last, dones, gamma, lam)
    assert got == pytest.approx(expected, abs=1e-12)


def test_clip_objective_hand_value():
    # one ratio inside the clip band, one outside
    logp_new = [math.log(2.0), 0.0]
    logp_old = [0.0, 0.0]
    adv = [1.0, -3.0]
    # rho = [2, 1]: min(2*1, 1.2*1) = 1.2 and min(1*-3, ...) = -3
    expected = -(1.2 + (-3.0)) / 2.0
    assert demoguide.clip_objective(logp_new, logp_old, adv, 0.2) == pytest.approx(
        expected, abs=1e-12
    )


def test_kmeans_single_cluster_is_mean():
    pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 3.0], [1.0, 3.0]]
    out = demoguide.kmeans(pts, k=1, max_iter=50, seed=4)
    assert out["centroids"][0] == pytest.approx([0.5, 1.5], abs=1e-12)
    assert out["inertia"] == pytest.approx(0.25 * 4 + 2.25 * 4, abs=1e-9)
    assert out["median_dist"] > 0.0


def test_env_shapes_and_termination():
    env = demoguide.Env("point_reach", seed=11)
    obs = env.reset()
    assert env.obs_dim == 6 and env.act_dim == 2
    assert len(obs) == env.obs_dim
    done = False
    steps = 0
    while not done:
        obs, reward, done = env.step([0.0, 0.0])
        assert len(obs) == env.obs_dim
        assert math.isfinite(reward)
        steps += 1
        assert steps <= env.horizon
    assert steps == env.horizon  # an idle agent never reaches the target


def test_trainer_runs_and_is_seeded(tmp_path):
    cfg = json.dumps({"epochs": 2, "steps_per_epoch": 100, "update_iters": 5, "seed": 3})
    rows_a = demoguide.Trainer("point_reach", cfg).run()
    rows_b = demoguide.Trainer("point_reach", cfg).run()
    assert [r["epoch"] for r in rows_a] == [1, 2]
    assert [r["env_steps"] for r in rows_a] == [100, 200]
    assert rows_a == rows_b
    assert all(r["demo_frames_used"] == 0 for r in rows_a)

    trainer = demoguide.Trainer("point_reach", cfg)
    trainer.run()
    ckpt = tmp_path / "ckpt.json"
    trainer.save_checkpoint(str(ckpt))
    payload = json.loads(ckpt.read_text())
    assert payload["env"] == "point_reach"


def test_record_demo_and_guided_trainer(tmp_path):
    cfg = json.dumps({"epochs": 1, "steps_per_epoch": 100, "update_iters": 2, "seed": 0})
    trainer = demoguide.Trainer("point_reach", cfg)
    trainer.run()
    ckpt = tmp_path / "expert.json"
    trainer.save_checkpoint(str(ckpt))

    demo_file = tmp_path / "demo.jsonl"
    meta = demoguide.record_demo(str(ckpt), episodes=3, out_file=str(demo_file), seed=9)
    assert meta["env"] == "point_reach"
    assert meta["episodes"] == 3
    assert meta["frames"] > 0
    assert demo_file.exists()

    guided_cfg = json.dumps(
        {
            "epochs": 2,
            "steps_per_epoch": 100,
            "update_iters": 5,
            "seed": 1,
            "cutoff_epoch": 2,
            "k_obs": 4,
            "k_act": 4,
        }
    )
    rows = demoguide.Trainer("point_reach", guided_cfg, demo_path=str(demo_file)).run()
    assert len(rows) == 2


def test_run_experiment_and_ratio_report(tmp_path):
    cfg = {
        "mode": "vanilla",
        "seeds": [0],
        "out_dir": str(tmp_path / "out"),
        "epochs": 2,
        "steps_per_epoch": 100,
        "update_iters": 5,
    }
    result = demoguide.run_experiment(json.dumps(cfg))
    assert result["all_ok"] is True
    (outcome,) = result["seeds"]
    assert outcome["ok"] is True
    assert len(outcome["rows"]) == 2

    report = json.loads(
        demoguide.efficiency_ratios_json([outcome["csv"]], [outcome["csv"]], window=1)
    )
    assert report["smoothing_window"] == 1
    assert {level["level_pct"] for level in report["levels"]} == {85.0, 70.0, 50.0, 20.0}
    for level in report["levels"]:
        if level["reached"]:
            assert level["ratio"] == pytest.approx(1.0)


def test_bad_config_is_rejected():
    with pytest.raises(Exception):
        demoguide.Trainer("point_reach", json.dumps({"learning_rate": 1.0}))
    with pytest.raises(Exception):
        demoguide.Env("treadmill")
