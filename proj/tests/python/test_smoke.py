# Copyright 2026 The skewlda Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import skewlda


def reference():
    return 0.7, np.array([2.0, 0.0, 0.0]), np.eye(3)


def test_constants():
    assert skewlda.c0_constant(0.7, 4.0) == pytest.approx(42.3753, rel=1e-5)
    assert skewlda.c_skewvec(0.7, 4.0, 3) == pytest.approx(245.434, rel=1e-5)
    assert skewlda.c_lda(0.7, 4.0) == pytest.approx(2.19048, rel=1e-5)
    with pytest.raises(ValueError, match="divergence"):
        skewlda.c0_constant(0.5, 4.0)


def test_limiting_covariances():
    a, h, s = reference()
    c = skewlda.c0_constant(a, 4.0)
    np.testing.assert_allclose(skewlda.avar_ae(c, a, h, s), np.diag([0.0, c, c]), atol=1e-10)
    cov = skewlda.avar_mom(a, h, s)
    assert np.allclose(cov, cov.T)
    assert np.linalg.norm(cov @ h) < 1e-10


def test_population_moments():
    a, h, s = reference()
    pm = skewlda.population_moments(a, h, s)
    np.testing.assert_allclose(pm["c2"], np.diag([1.84, 1.0, 1.0]), atol=1e-12)
    np.testing.assert_allclose(pm["c3"], [0.672, 0.0, 0.0], atol=1e-12)
    assert pm["cov_xkronx"].shape == (9, 9)


def test_sample_and_estimate():
    a, h, s = reference()
    x, labels = skewlda.sample(a, -0.3 * h, 0.7 * h, s, 4000, seed=3)
    assert x.shape == (4000, 3)
    assert set(np.unique(labels)) == {-1, 1}
    for method in ["skewvec", "tobi", "jade3", "pp"]:
        est = skewlda.estimate(method, x)
        assert abs(np.linalg.norm(est["unit"]) - 1.0) < 1e-12
        assert skewlda.msi(est["unit"], h) > 0.95
    est = skewlda.estimate("mom", x, alpha1=0.7)
    assert skewlda.msi(est["unit"], h) > 0.9
    est = skewlda.estimate("lda", x, labels=labels)
    assert skewlda.msi(est["unit"], h) > 0.99
    with pytest.raises(ValueError, match="supervision_required"):
        skewlda.estimate("lda", x)
    with pytest.raises(ValueError, match="usage"):
        skewlda.estimate("mom", x)


def test_sample_is_seeded():
    a, h, s = reference()
    x1, _ = skewlda.sample(a, -0.3 * h, 0.7 * h, s, 10, seed=9)
    x2, _ = skewlda.sample(a, -0.3 * h, 0.7 * h, s, 10, seed=9)
    np.testing.assert_array_equal(x1, x2)


def test_msi_and_orth_unit():
    assert skewlda.msi(np.array([1.0, 0.0]), np.array([-3.0, 0.0])) == 1.0
    np.testing.assert_allclose(skewlda.orth_unit(np.array([2.0, 0.0, 0.0])), [0.0, 1.0, 0.0])


def test_simulations():
    config = {
        "p": 3,
        "alpha_grid": [0.7],
        "tau_grid": [4.0],
        "n_grid": [400],
        "reps": 10,
        "master_seed": 1,
        "methods": ["tobi", "jade3"],
        "threads": 2,
    }
    csv = skewlda.simulate_chat(config)
    lines = csv.strip().split("\n")
    assert lines[0] == "method,alpha1,tau,n,reps_used,reps_failed,c_hat,c_theory"
    assert len(lines) == 3
    assert csv == skewlda.simulate_chat(dict(config, threads=1))
    msi = skewlda.simulate_msi(config)
    assert msi.startswith("method,alpha1,tau,n,p,reps_used,reps_failed,mean_msi\n")
    with pytest.raises(ValueError, match="reps"):
        skewlda.simulate_chat(dict(config, reps=1))
