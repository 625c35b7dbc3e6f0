# Copyright 2026 The wpirlab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python front end for the wpirlab C++ core."""

from fractions import Fraction

from . import _wpirlab
from ._wpirlab import Setting, saturation_leakage

__all__ = [
    "Setting",
    "analytic_leakage",
    "capacity",
    "empirical_leakage",
    "run_experiment",
    "run_session",
    "saturation_leakage",
    "sweep_curve",
    "theorem_tradeoff",
    "wpir_rate",
]


def _pmf(pmf):
    """Accepts "1/2,1/2" or a sequence of Fractions, ints, strings or floats."""
    if isinstance(pmf, str):
        return pmf
    parts = []
    for p in pmf:
        if isinstance(p, float):
            p = Fraction(p).limit_denominator(10**12)
        parts.append(str(Fraction(p)))
    return ",".join(parts)


def _point(d):
    d = dict(d)
    d["p0"] = Fraction(d["p0"])
    d["rate"] = Fraction(d["rate"])
    return d


def capacity(setting):
    return Fraction(_wpirlab.capacity(setting))


def wpir_rate(setting, pmf):
    return Fraction(_wpirlab.wpir_rate(setting, _pmf(pmf)))


def analytic_leakage(setting, pmf, metric="mil"):
    return _wpirlab.analytic_leakage(setting, _pmf(pmf), metric)


def empirical_leakage(setting, pmf, metric="mil", method="exhaustive", samples=100000, seed=1):
    return _wpirlab.empirical_leakage(setting, _pmf(pmf), metric, method, samples, seed)


def theorem_tradeoff(setting, metric, rho):
    return _point(_wpirlab.theorem_tradeoff(setting, metric, float(rho)))


def sweep_curve(setting, metric="mil", grid=101):
    return [_point(p) for p in _wpirlab.sweep_curve(setting, metric, grid)]


def run_session(setting, theta, pmf, seed=1, library_seed=1, field="gf256"):
    return _wpirlab.run_session(setting, theta, _pmf(pmf), seed, library_seed, field)


def run_experiment(setting, pmf, trials=1000, seed=1, threads=1, field="gf256"):
    out = dict(_wpirlab.run_experiment(setting, _pmf(pmf), trials, seed, threads, field))
    out["analytic_rate"] = Fraction(out["analytic_rate"])
    return out
