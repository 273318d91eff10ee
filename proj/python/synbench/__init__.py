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

"""Python interface to the synbench C++ core."""

import json as _json

from ._synbench import *  # noqa: F401,F403
from ._synbench import __version__, run_benchmark as _run_benchmark


def run(config, seed=None, workers=None, output_dir=None):
  """Runs a benchmark config file and returns the report as a dict."""
  return _json.loads(_run_benchmark(str(config), seed, workers,
                                    None if output_dir is None else str(output_dir)))
