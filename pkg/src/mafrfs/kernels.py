"""Backend selection for the hot kernels.

The compiled extension is preferred when importable; set MAFRFS_PURE_PYTHON=1
to force the NumPy fallback. Both backends share the semantics documented in
`mafrfs._kernels_np`.
"""

import os

from mafrfs import _kernels_np

if os.environ.get("MAFRFS_PURE_PYTHON", "") == "1":
    _impl = _kernels_np
else:
    try:
        from mafrfs import _speedups as _impl
    except ImportError:
        _impl = _kernels_np

relation_from_column = _impl.relation_from_column
conjoin_with_column = _impl.conjoin_with_column
conjoin_inplace = _impl.conjoin_inplace
cardinalities = _impl.cardinalities
joint_cardinalities = _impl.joint_cardinalities
positive_memberships = _impl.positive_memberships
scan_cardinalities = _impl.scan_cardinalities
scan_joint_cardinalities = _impl.scan_joint_cardinalities
scan_positive_memberships = _impl.scan_positive_memberships


def backend_name():
    """Name of the active backend: 'compiled' or 'numpy'."""
    return _impl.name


def available_backends():
    """All importable backend modules, keyed by name."""
    backends = {_kernels_np.name: _kernels_np}
    try:
        from mafrfs import _speedups

        backends[_speedups.name] = _speedups
    except ImportError:
        pass
    return backends
