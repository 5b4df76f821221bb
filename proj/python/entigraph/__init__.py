"""Entity graph core from Python.

Thin layer over the compiled ``_entigraph`` module: interchange files are
passed as JSON text, results come back as plain dicts and lists.
"""

import json

from . import _entigraph
from ._entigraph import GraphError, InvalidFileError

__all__ = ["GraphError", "InvalidFileError", "Session", "validate", "canonicalize", "search", "layout"]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def validate(doc):
    """Every violation in an interchange file; empty means it imports cleanly."""
    return json.loads(_entigraph.validate(_text(doc)))


def canonicalize(doc):
    """Canonical export bytes (as str) of an interchange file."""
    return _entigraph.canonicalize(_text(doc))


def search(doc, query, limit=10):
    return json.loads(_entigraph.search(_text(doc), query, limit))


def layout(doc, steps, mode=None, params=None):
    """Seeded ForceAtlas2 layout of the default view: {"kind:id": [x, y]}."""
    raw = _entigraph.layout(_text(doc), steps, mode, None if params is None else json.dumps(params))
    return {k: tuple(v) for k, v in json.loads(raw).items()}


class Session:
    """In-process editing session with the same semantics as the HTTP service."""

    def __init__(self, doc):
        self._s = _entigraph.Session(_text(doc))

    @property
    def revision(self):
        return self._s.revision

    def view(self, mode=None, scheme=None):
        return json.loads(self._s.view(mode, scheme))

    def view_state(self):
        return json.loads(self._s.view_state())

    def set_view(self, **state):
        return self._s.set_view(json.dumps(state))

    def mutate(self, ops, expected_revision):
        return json.loads(self._s.mutate(json.dumps(ops), expected_revision))

    def undo(self, expected_revision=None):
        return self._s.undo(expected_revision)

    def redo(self, expected_revision=None):
        return self._s.redo(expected_revision)

    def step(self, steps=1, params=None):
        return json.loads(self._s.step(steps, None if params is None else json.dumps(params)))

    def pin(self, key, x, y):
        self._s.pin(key, x, y)

    def unpin(self, key):
        self._s.unpin(key)

    def search(self, query, limit=10):
        return json.loads(self._s.search(query, limit))

    def export(self):
        return self._s.export()
