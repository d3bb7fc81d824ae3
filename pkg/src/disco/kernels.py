"""Backend selection for the fuzzy matching kernel.

The compiled ``disco._cfuzzy`` extension is used when it was built;
otherwise the pure-Python module is loaded. Set ``DISCO_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from disco import _pyfuzzy

if os.environ.get("DISCO_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pyfuzzy
else:
    try:
        from disco import _cfuzzy as _impl
    except ImportError:
        _impl = _pyfuzzy

BACKEND = "cython" if _impl is not _pyfuzzy else "python"

levenshtein = _impl.levenshtein
edit_similarity = _impl.edit_similarity
fuzzy_score = _impl.fuzzy_score
best_score = _impl.best_score


def backends():
    """All importable backends, keyed by name."""
    found = {"python": _pyfuzzy}
    try:
        from disco import _cfuzzy
    except ImportError:
        pass
    else:
        found["cython"] = _cfuzzy
    return found
