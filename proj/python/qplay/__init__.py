# Copyright 2026 The QML Playground Authors
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

"""Data re-uploading quantum classifier playground: simulator, models,
training, datasets, geometry, headless runs and the HTTP service."""

import json as _json
from typing import Any, Mapping, Tuple

from ._qplay import (  # noqa: F401
    Dataset,
    DatasetKind,
    Entangler,
    ForwardTrace,
    Model,
    ModelConfig,
    NotFoundError,
    ParameterSet,
    Sample,
    Server,
    StateVector,
    Trainer,
    ValidationError,
    Variant,
    apply_cx,
    apply_cz,
    apply_gate,
    batch_loss,
    bloch_coordinates,
    build_model,
    concurrence,
    decision_grid,
    default_simplex_vertices,
    fidelity,
    forward,
    gates,
    generate,
    gradients,
    ground_truth_label,
    parse_dataset_kind,
    predict,
    probabilities,
    simplex_coordinates,
    split,
    zero_state,
)
from . import _qplay

EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_CONFIG_ERROR = 2


def parse_session_config(config: Mapping[str, Any]) -> dict:
    """Validate a session config; returns it with every default filled in.

    Raises ValidationError naming each offending field."""
    return _json.loads(_qplay.parse_session_config(_json.dumps(config)))


def run_headless(config: Mapping[str, Any], epochs: int, out_dir) -> Tuple[int, str]:
    """Train without a server and write metrics.csv, frames.jsonl and
    params.json to out_dir. Returns (exit_code, diagnostics)."""
    return _qplay.run_headless(_json.dumps(config), epochs, out_dir)
