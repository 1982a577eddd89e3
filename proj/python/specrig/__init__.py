"""Spectral and geometric machinery for radial coefficient profiles.

The compiled core exposes profile construction, the radial eigensolver,
eigenvalue perturbation formulas, broken-ray geometry and the windowed
wave trace. See the project README for the CLI and file formats.
"""

from ._core import *  # noqa: F401,F403
