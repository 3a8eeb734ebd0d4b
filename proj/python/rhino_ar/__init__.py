"""Python access to the simulation core and the questionnaire statistics."""

import json

from . import _core
from ._core import (
    PROTOCOL_VERSION,
    RhinoError,
    fnv1a64,
    mann_whitney_u,
    one_sample_t,
    one_sample_t_samples,
    plan,
    reverse_item,
    understanding_score,
)


class Session:
    """Thin wrapper that speaks dicts instead of JSON text."""

    def __init__(self, scenario_path):
        self._s = _core.Session(str(scenario_path))

    @property
    def tick(self):
        return self._s.tick

    def hello(self):
        return json.loads(self._s.hello())

    def snapshot(self):
        return json.loads(self._s.snapshot())

    def run_tick(self):
        return json.loads(self._s.run_tick())

    def enqueue(self, command):
        self._s.enqueue(json.dumps(command))


__all__ = [
    "PROTOCOL_VERSION",
    "RhinoError",
    "Session",
    "fnv1a64",
    "mann_whitney_u",
    "one_sample_t",
    "one_sample_t_samples",
    "plan",
    "reverse_item",
    "understanding_score",
]
