"""Averaging families on PSL(2,R) and their ergodic averages."""

try:
    from ._hypererg import *  # noqa: F401,F403
except ImportError:  # running against a build tree with the extension on sys.path
    from _hypererg import *  # noqa: F401,F403
