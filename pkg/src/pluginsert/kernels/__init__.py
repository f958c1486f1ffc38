"""Geometry kernel backend selection.

Imports the compiled backend when available, otherwise the pure-numpy
reference.  ``PLUGINSERT_KERNELS=ref|fast`` forces a choice (``fast`` raises
if the extension is missing).  Both backends compute identical values; see
``benchmarks/kernel_bench.py`` for a speed comparison.
"""

import os

from . import _ref

_choice = os.environ.get("PLUGINSERT_KERNELS", "").strip().lower()

if _choice == "ref":
    _impl = _ref
elif _choice == "fast":
    from . import _fast as _impl
else:
    try:
        from . import _fast as _impl
    except ImportError:
        _impl = _ref

BACKEND = _impl.BACKEND
PRIM_CYLINDER = _ref.PRIM_CYLINDER
PRIM_BOX = _ref.PRIM_BOX
PRIM_PRISM3 = _ref.PRIM_PRISM3

socket_sdf_points = _impl.socket_sdf_points
plug_sdf_points = _impl.plug_sdf_points
min_socket_sdf = _impl.min_socket_sdf
socket_sdf_transformed = _impl.socket_sdf_transformed


def backend_name() -> str:
    return BACKEND
