"""Explainable multi-term reputation.

Thin wrappers over the C++ core: documents go in and come out as plain
dicts (JSON text is accepted too).
"""

import json

from . import _core
from ._core import ReptraceError, run_cli

__version__ = _core.__version__

__all__ = ["ReptraceError", "simulate", "assess", "explain", "render", "run_cli"]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def simulate(scenario, seed=None):
    """Run a scenario and return the stores document."""
    return json.loads(_core.simulate(_text(scenario), seed))


def assess(stores, assessor, model=None):
    """Rank every provider in `stores` for `assessor`."""
    return json.loads(_core.assess(_text(stores), assessor, model))


def explain(stores, assessor, preferred, other, model=None, pros_order="descending"):
    """Arguments for why `preferred` outranks `other`.

    Raises ReptraceError (code "NotPreferred") when it does not.
    """
    return json.loads(_core.explain(_text(stores), assessor, preferred, other, model, pros_order))


def render(explanation, names=None, templates=None):
    """Render an explanation document as text.

    `templates` is the content of a template file, not a path.
    """
    return _core.render(_text(explanation), names or {}, templates)
