"""Exploration-kernel selection.

The compiled kernel is picked once at import time when it is available;
set ``GMEC_KERNEL=pure`` or ``GMEC_KERNEL=compiled`` to force a choice.
Markings whose token counts may exceed one byte are always routed to the
pure kernel regardless of the selection.
"""

from __future__ import annotations

import os

from gmec import _explore_py

try:
    from gmec import _explore_c
except ImportError:  # extension not built; pure fallback
    _explore_c = None

STATUS_COMPLETE = _explore_py.STATUS_COMPLETE
STATUS_MARKING_CAP = _explore_py.STATUS_MARKING_CAP
STATUS_TOKEN_CAP = _explore_py.STATUS_TOKEN_CAP
STATUS_DOMINATION = _explore_py.STATUS_DOMINATION

_mode = os.environ.get("GMEC_KERNEL", "auto")
if _mode == "pure":
    _active = _explore_py
elif _mode == "compiled":
    if _explore_c is None:
        raise ImportError("GMEC_KERNEL=compiled but the compiled kernel is not built")
    _active = _explore_c
elif _mode == "auto":
    _active = _explore_c if _explore_c is not None else _explore_py
else:
    raise ValueError(f"GMEC_KERNEL must be auto, pure or compiled, not {_mode!r}")


def compiled_available() -> bool:
    return _explore_c is not None


def kernel_name() -> str:
    return "compiled" if _active is _explore_c else "pure"


def explore(n_places, pre, post, allowed, root, max_markings, max_tokens):
    impl = _active
    if impl is _explore_c and (max_tokens > 255 or any(x > 255 for x in root)):
        impl = _explore_py
    return impl.explore(n_places, pre, post, allowed, root, max_markings, max_tokens)
