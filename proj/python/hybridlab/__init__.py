# Copyright 2026 the hybridlab authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the hybridlab core library."""

try:
    from hybridlab._hybridlab import *  # noqa: F401,F403
    from hybridlab._hybridlab import __doc__ as _core_doc
except ImportError:  # in-build-tree layout: the module sits next to this package
    from _hybridlab import *  # noqa: F401,F403
    from _hybridlab import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"
