"""Hexapod locomotion stack bindings."""

try:
    from ._hexcpg import *  # noqa: F401,F403
    from ._hexcpg import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension next to the package
    from _hexcpg import *  # noqa: F401,F403
    from _hexcpg import __version__  # noqa: F401
