# Copyright 2026 The Synbench Authors
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

import json

import numpy as np
import pytest

import synbench


def make_table(rows=400, seed=0):
  rng = np.random.default_rng(seed)
  z = rng.normal(size=rows)
  sex = rng.integers(0, 2, rows)
  codes = [(rng.random(rows) < 1 / (1 + np.exp(-(z - 1 + 0.3 * k)))) for k in range(6)]
  f0 = (sex == 1) & (rng.random(rows) < 0.3)
  lab = np.round(50 + 10 * z + rng.normal(size=rows), 1)
  y = rng.random(rows) < 1 / (1 + np.exp(-1.5 * z))
  values = np.column_stack([sex] + codes + [f0, lab, y]).astype(float)
  columns = ([("sex", "binary", "qid")] +
             [(f"c{k}", "binary", "feature") for k in range(6)] +
             [("f0", "binary", "feature"), ("lab", "continuous", "feature"),
              ("outcome", "binary", "outcome")])
  return synbench.Dataset(columns, values)


def test_primitives():
  assert synbench.auroc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75
  assert synbench.f1_score([1, 1, 0, 0], [1, 0, 1, 0]) == 0.5
  assert synbench.wasserstein_1d([0.0, 1.0], [1.0, 2.0]) == pytest.approx(1.0)
  assert synbench.rank_with_ties([0.1, 0.3, 0.1]) == [1.5, 3.0, 1.5]
  assert synbench.rank_with_ties([0.1, 0.3], higher_is_better=True) == [2.0, 1.0]


def test_profiles_and_final_scores():
  names = [name for name, _ in synbench.builtin_profiles()]
  assert {"Education", "Medical-AI", "Systems-Dev"} <= set(names)
  scores = {"dwd": {"A": 2.0, "B": 5.0}, "tstr": {"A": 4.0, "B": 3.0}}
  ranking = synbench.final_scores(scores, {"dwd": 0.5, "tstr": 0.5})
  assert [m for m, _ in ranking] == ["A", "B"]
  assert ranking[0][1] == pytest.approx(3.0)


def test_identity_metrics():
  d = make_table()
  assert d.rows == 400
  assert synbench.dimension_wise_distribution(d, d) == 0.0
  assert synbench.correlation_distance(d, d) == 0.0
  assert synbench.membership_inference_risk(d, make_table(seed=1), d) > 0.5
  assert synbench.identity_disclosure_risk(d, d, d, ["sex"]) > 0.0


def test_baseline_breaks_prediction():
  real = make_table(1500)
  synth = synbench.sample_marginal(real, 1500, seed=3)
  assert synth.rows == 1500
  assert synbench.evaluate_tstr(real, make_table(600, 2), bootstrap=50)["auroc"] > 0.7
  assert abs(synbench.evaluate_trts(real, synth, bootstrap=50)["auroc"] - 0.5) < 0.06


def test_errors_surface_as_synbench_error():
  with pytest.raises(synbench.SynbenchError):
    synbench.auroc([0.1, 0.2], [1, 1])
  with pytest.raises(synbench.SynbenchError):
    synbench.load_dataset("/nonexistent/file.csv")


def test_run_benchmark(tmp_path):
  real = make_table(300)
  header = ",".join(name for name, _, _ in real.columns)
  lines = [header] + [",".join(f"{v:g}" for v in row) for row in real.values]
  (tmp_path / "real.csv").write_text("\n".join(lines) + "\n")
  schema = {"columns": [{"name": n, "kind": k, "role": r} for n, k, r in real.columns]}
  (tmp_path / "real.schema.json").write_text(json.dumps(schema))
  config = json.loads(synbench.config_template())
  config.update({
      "real": {"data": "real.csv"},
      "generators": [{"name": "Baseline", "builtin": "baseline"}],
      "min_feature_count": 0,
  })
  config["metrics"].update({"bootstrap": 20, "risk_bootstrap": 10,
                            "importance_repeats": 1, "top_m": 3,
                            "knowledge_group": "sex"})
  (tmp_path / "config.json").write_text(json.dumps(config))
  report = synbench.run(tmp_path / "config.json", seed=4, output_dir=tmp_path / "out")
  assert report["status"] == "ok"
  assert (tmp_path / "out" / "report.json").exists()
  assert report["final_scores"]
