# Copyright 2026 The qsdc-sim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python interface to the QSDC / MCQSDC simulator."""

import csv
import io
import json

from ._core import (
    ConfigError,
    ProtocolError,
    apply_ops,
    apply_ops_symbolic,
    compose_effects,
    overlap,
    state_from_label,
)
from . import _core

__all__ = [
    "ConfigError",
    "ProtocolError",
    "apply_ops",
    "apply_ops_symbolic",
    "compose_effects",
    "overlap",
    "run",
    "selftest",
    "state_from_label",
    "sweep",
]


def run(config, seed=None):
    """Run one session. Returns (report dict, list of transcript events)."""
    config = dict(config)
    if seed is not None:
        config["seed"] = seed
    report, transcript = _core.run_json(json.dumps(config))
    events = [json.loads(line) for line in transcript.splitlines() if line]
    return json.loads(report), events


def sweep(config, workers=0):
    """Run a sweep. Returns the CSV text and its rows as dicts."""
    text = _core.sweep_csv(json.dumps(config), workers)
    return text, list(csv.DictReader(io.StringIO(text)))


def selftest():
    """Run the built-in consistency suite."""
    return _core.selftest()
