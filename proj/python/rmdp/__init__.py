# Copyright 2026 The rmdp Authors. All rights reserved.
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

"""Robust layered MDP solvers."""

import json

from . import _rmdp
from ._rmdp import Error, run_cli

__all__ = ["Error", "budget", "cfr_simple_case", "pac_sweep", "run_cli",
           "simple_case", "solve"]


def budget(theorem, eps, delta, lam=0.0, u=0.0, horizon=2, d=4, s=5, a=2):
    """Per-pair sample budget as a dict with n, delta_prime and friends."""
    return json.loads(_rmdp.budget(theorem, eps, delta, lam, u, horizon, d, s, a))


def solve(mdp, set=""):
    """Robust NE of an MDP given as inline JSON text or a file path."""
    if isinstance(mdp, dict):
        mdp = json.dumps(mdp)
    if isinstance(set, dict):
        set = json.dumps(set)
    return json.loads(_rmdp.solve(mdp, set))


def cfr_simple_case(u=0.05, iterations=1000):
    """CFR on the homogeneous simple-case game."""
    return json.loads(_rmdp.cfr_simple_case(u, iterations))


def simple_case(u_list, budget=2000, seeds=(0,), eval_draws=10000):
    """Simple-case comparison report with one cell per method, u and seed."""
    return json.loads(_rmdp.simple_case(list(u_list), budget, list(seeds),
                                        eval_draws))


def pac_sweep(theorem=2, eps=0.5, delta=0.1, trials=200, seed=0, u=-1.0):
    """Success frequency of the plug-in solver over random instances."""
    return json.loads(_rmdp.pac_sweep(theorem, eps, delta, trials, seed, u))
