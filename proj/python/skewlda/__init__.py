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

"""Unsupervised linear discriminant directions from skewness."""

import json as _json

from ._skewlda import (
    avar_ae,
    avar_mom,
    c0_constant,
    c_lda,
    c_skewvec,
    estimate,
    msi,
    orth_unit,
    population_moments,
    sample,
)
from . import _skewlda

__all__ = [
    "avar_ae",
    "avar_mom",
    "c0_constant",
    "c_lda",
    "c_skewvec",
    "estimate",
    "msi",
    "orth_unit",
    "population_moments",
    "sample",
    "simulate_chat",
    "simulate_msi",
]


def simulate_chat(config):
    """Run the C-hat experiment for a config dict and return the CSV text."""
    return _skewlda.simulate_chat_csv(_json.dumps(config))


def simulate_msi(config):
    """Run the MSI sweep for a config dict and return the CSV text."""
    return _skewlda.simulate_msi_csv(_json.dumps(config))
