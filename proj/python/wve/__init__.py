# Copyright 2026 The WVE Authors. All Rights Reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Weighted voting ensemble for tabular stroke-risk data."""

from __future__ import annotations

import json
from dataclasses import dataclass
from os import PathLike
from typing import Any

from wve import _core
from wve._core import WveError, bmi_band, glucose_band

__all__ = [
    "Model",
    "WveError",
    "benchmark",
    "bmi_band",
    "glucose_band",
    "make_config",
    "synthesize",
    "train",
]


def make_config(**options: Any) -> _core.RunConfig:
    """Builds a run configuration; `lambda` may be passed as `lambda_`."""
    config = _core.RunConfig()
    for key, value in options.items():
        name = "lambda_" if key == "lambda" else key
        if not hasattr(config, name):
            raise TypeError(f"unknown option: {key}")
        setattr(config, name, value)
    return config


def synthesize(n: int = 2000, seed: int = 0, noise: float = 0.1,
               positive_rate: float = 1.0 / 3.0) -> str:
    """Returns a synthetic data set as CSV text."""
    return _core.synthesize(n, seed, noise, positive_rate)


class Model:
    """A trained model document."""

    def __init__(self, document: _core.ModelDocument):
        self._doc = document

    @classmethod
    def load(cls, path: str | PathLike) -> Model:
        return cls(_core.load_model(path))

    @classmethod
    def from_json(cls, text: str) -> Model:
        return cls(_core.parse_document(text))

    def save(self, path: str | PathLike) -> None:
        self._doc.save(path)

    def to_json(self) -> str:
        return self._doc.serialize()

    @property
    def kind(self) -> str:
        return self._doc.kind

    @property
    def schema(self) -> list[str]:
        return list(self._doc.schema)

    @property
    def metadata(self) -> dict:
        return json.loads(self._doc.metadata_json)

    def predict(self, csv: str, threshold: float = 0.5) -> list[dict]:
        return _core.predict(self._doc, csv, threshold)

    def evaluate(self, csv: str, **options: Any) -> dict:
        return json.loads(_core.evaluate(self._doc, csv, make_config(**options)))


@dataclass
class TrainResult:
    model: Model
    report: str
    test_metrics: dict


def train(csv: str, **options: Any) -> TrainResult:
    """Cleans, splits and fits the ensemble; metrics are on the held-out split."""
    doc, report, metrics = _core.train(csv, make_config(**options))
    return TrainResult(Model(doc), report, json.loads(metrics))


def benchmark(csv: str, scaling: bool = False, **options: Any) -> tuple[str, dict]:
    """Fits every baseline and the ensemble; returns the table and its JSON form."""
    table, doc = _core.benchmark(csv, make_config(**options), scaling)
    return table, json.loads(doc)
