# SPDX-License-Identifier: Apache-2.0
#
# csikit - massive MIMO CSI toolkit
# Copyright (C) 2026 The csikit authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

import math
import os
import subprocess

import numpy as np
import pytest

import csikit


def test_topologies():
    assert csikit.topology("ura").shape == (64, 6)
    assert csikit.topology("ula").shape == (64, 6)
    assert csikit.topology("da").shape == (64, 6)
    with pytest.raises(ValueError):
        csikit.topology("hex")


def test_pilots_interleave():
    f0 = csikit.pilot_frequencies(0)
    f1 = csikit.pilot_frequencies(1)
    assert len(f0) == 100
    assert f1[0] - f0[0] == pytest.approx(15e3)
    assert f0[1] - f0[0] == pytest.approx(180e3)


def test_los_channel_and_file_roundtrip(tmp_path):
    h = csikit.los_channel("ura", [0.0, 2250.0, 1000.0])
    assert h.shape == (64, 100)
    assert np.all(np.isfinite(h))
    path = tmp_path / "000001.bin"
    assert csikit.write_sample(str(path), h) == 51212
    back = csikit.read_sample(str(path))
    assert np.array_equal(back, h.astype(np.complex64).astype(np.complex128))
    path.write_bytes(b"XXXX" + path.read_bytes()[4:])
    with pytest.raises(csikit.DatasetError):
        csikit.read_sample(str(path))


def test_precoders():
    rng = np.random.default_rng(3)
    hs = [(rng.standard_normal((8, 4)) + 1j * rng.standard_normal((8, 4))) / math.sqrt(2) for _ in range(3)]
    mrt = csikit.mrt_weights(hs)
    assert np.linalg.norm(mrt[0][:, 0]) == pytest.approx(1.0)
    zf = csikit.zf_weights(hs)
    leak = abs(hs[1][:, 0] @ zf[0][:, 0]) ** 2
    assert leak < 1e-20
    se = csikit.group_spectral_efficiency(hs, "zf")
    assert len(se) == 3 and min(se) > 0
    with pytest.raises(ValueError):
        csikit.zf_weights([hs[0][:2]] * 3)


def test_scheduling():
    rng = np.random.default_rng(4)
    pos = [[float(x), float(y), 1000.0] for x, y in rng.uniform(0, 2000, (12, 2))]
    groups = csikit.def_schedule(pos, 4)
    assert sorted(u for g in groups for u in g) == list(range(12))
    assert all(len(g) <= 4 for g in groups)
    rnd = csikit.random_schedule(12, 4, 7)
    assert sorted(u for g in rnd for u in g) == list(range(12))


def test_localization_exact_on_training_points():
    labels = [[x, 2000.0, 1000.0] for x in (0.0, 50.0, 100.0, 150.0)]
    chans = [csikit.los_channel("ura", p) for p in labels]
    r = csikit.leave_one_out(chans, labels, k=1)
    assert r["mean_mm"] == pytest.approx(50.0)
    assert len(r["errors_mm"]) == 4


def test_campaign_plan_defaults():
    plan = csikit.campaign_plan()
    assert plan["total_waypoints"] == 4 * 63001
    assert plan["rounds"] == 63001


def test_cli_in_process_and_binary(tmp_path):
    rc, out, err = csikit.run_cli(["--help"])
    assert rc == 0 and "synth" in out
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"CSI")
    rc, out, err = csikit.run_cli(["inspect", str(bad)])
    assert rc == 1 and ("truncated" in err or "shorter" in err)
    exe = os.environ.get("CSIKIT_CLI")
    if exe:
        res = subprocess.run([exe, "synth", "--out", str(tmp_path / "d"), "--extent", "10", "--resolution", "5"],
                             capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        assert len(list((tmp_path / "d").glob("*.bin"))) == 9
