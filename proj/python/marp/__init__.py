"""Alternating relaxed projections for two-set feasibility problems."""

import json

from . import _core
from ._core import ConfigError

__all__ = ["ConfigError", "run", "project", "rates", "cq", "examples"]


def run(config):
    """Run a configuration (dict or JSON string); returns (summary, arrays)."""
    text = config if isinstance(config, str) else json.dumps(config)
    summary, arrays = _core.run_config(text)
    return json.loads(summary), arrays


def project(set_spec, point):
    """Nearest points of `point` in the set described by `set_spec`."""
    text = set_spec if isinstance(set_spec, str) else json.dumps(set_spec)
    return _core.project(text, point)


def rates(theta, eps=None, lambda_="const:1", mu="const:1", horizon=10000, radius=1.0):
    return json.loads(_core.rates(theta, eps, lambda_, mu, horizon, radius))


def cq(scenario="sawtooth", delta=0.5, method="exact2d", samples=20000, seed=1,
       probe_regularity=False):
    return json.loads(_core.cq(scenario, delta, method, samples, seed, probe_regularity))


def examples(id=""):
    return json.loads(_core.examples(id))
