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

import json

import pytest

import wve

SMALL = dict(trees=15, rounds=15, folds=3)


@pytest.fixture(scope="module")
def data():
    return wve.synthesize(n=400, seed=7)


@pytest.fixture(scope="module")
def trained(data):
    return wve.train(data, seed=7, **SMALL)


def test_synthesize_is_deterministic():
    a = wve.synthesize(n=50, seed=3)
    assert a == wve.synthesize(n=50, seed=3)
    assert len(a.strip().splitlines()) == 51


def test_train_reports_metrics(trained):
    assert trained.model.kind == "wve"
    assert 0.0 <= trained.test_metrics["macro"]["accuracy"] <= 1.0
    assert "# training report" in trained.report
    assert trained.model.metadata["config"]["seed"] == 7


def test_round_trip_preserves_predictions(trained, data, tmp_path):
    path = tmp_path / "model.json"
    trained.model.save(path)
    loaded = wve.Model.load(path)
    assert loaded.to_json() == trained.model.to_json()
    assert loaded.predict(data) == trained.model.predict(data)


def test_predict_rows_and_bands(trained, data):
    rows = trained.model.predict(data)
    assert len(rows) == 400
    first = rows[0]
    assert set(first) == {"row", "label", "proba", "bmi_band", "glucose_band"}
    assert first["label"] in (0, 1)
    assert 0.0 <= first["proba"] <= 1.0


def test_predict_empty_input(trained, data):
    header = data.splitlines()[0] + "\n"
    assert trained.model.predict(header) == []


def test_evaluate(trained, data):
    summary = trained.model.evaluate(data)
    assert summary["rows"] == 400


def test_errors_carry_kind(trained):
    doc = json.loads(trained.model.to_json())
    doc["format_version"] = 99
    with pytest.raises(wve.WveError) as info:
        wve.Model.from_json(json.dumps(doc))
    assert info.value.kind == "VersionMismatch"
    with pytest.raises(ValueError):
        trained.model.predict("gender,age\nMale,3\n")
    with pytest.raises(TypeError):
        wve.make_config(nonsense=1)


def test_benchmark_rows(data):
    table, doc = wve.benchmark(data, seed=1, **SMALL)
    assert len(doc["models"]) == 8
    assert doc["models"][-1]["name"] == "Weighted Voting Ensemble"
    assert "Naive Bayes" in table


def test_risk_bands():
    assert wve.bmi_band(33.8) == "obese"
    assert wve.glucose_band(217.08) == "elevated"
