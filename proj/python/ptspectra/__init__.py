"""Spectra of PT-symmetric double wells: eigenvalues, parameter sweeps, exceptional points."""

import json

from . import _core
from ._core import (
    AmbiguousTransition,
    BadBracket,
    BadGeometry,
    ConfigError,
    DegenerateEnergy,
    Error,
    LostBranch,
    NoConvergence,
    Overflow,
    UnboundedBelow,
)

__version__ = _core.__version__

__all__ = [
    "eigenvalues",
    "oracle_eigenvalues",
    "sweep",
    "find_ep",
    "figure",
    "preset_names",
    "preset_jobs",
    "potential",
    "characteristic",
    "config_hash",
    "Error",
    "ConfigError",
    "DegenerateEnergy",
    "NoConvergence",
    "BadBracket",
    "LostBranch",
    "AmbiguousTransition",
    "Overflow",
    "UnboundedBelow",
    "BadGeometry",
]


def _rect(rect):
    if isinstance(rect, dict):
        return rect
    re_lo, re_hi, im_lo, im_hi = rect
    return {"re": [float(re_lo), float(re_hi)], "im": [float(im_lo), float(im_hi)]}


def _grid(grid):
    if isinstance(grid, dict):
        return grid
    return [float(v) for v in grid]


def _dump(config):
    return json.dumps(config, allow_nan=False)


def _with_energies(doc):
    for row in doc["rows"]:
        row["energy"] = complex(row["re_E"], row["im_E"])
    return doc


def eigenvalues(spec, rect, **options):
    """Bound states of `spec` inside the energy rectangle (re_lo, re_hi, im_lo, im_hi).

    Extra keyword arguments are config fields ("roots", "solver", ...).
    Returns the rows of the root table, each with a complex "energy".
    """
    config = {"spec": spec, "rect": _rect(rect), **options}
    return _with_energies(json.loads(_core.solve(_dump(config))))["rows"]


def oracle_eigenvalues(spec, rect, n=8000, L=None, **options):
    """Same as eigenvalues, from a finite-difference discretization on [-L, L] with n nodes."""
    oracle = {"n": n}
    if L is not None:
        oracle["L"] = L
    config = {"spec": spec, "rect": _rect(rect), "oracle": oracle, **options}
    return _with_energies(json.loads(_core.oracle(_dump(config))))["rows"]


def sweep(spec, axis, grid, rect, **options):
    """Track the lowest levels while `axis` runs over `grid`; classify each doublet.

    Returns {"rows", "transition", "transitions", "meta"}.
    """
    config = {"spec": spec, "axis": axis, "grid": _grid(grid), "rect": _rect(rect), **options}
    return _with_energies(json.loads(_core.sweep(_dump(config))))


def find_ep(spec, axis, grid, rect, **options):
    """The first exceptional point found along the sweep, or None when no doublet coalesces."""
    for t in sweep(spec, axis, grid, rect, **options)["transitions"]:
        if t["kind"] == "coalescing" and t.get("ep") is not None:
            ep = dict(t["ep"])
            ep["energy_star"] = complex(ep["energy_star"]["re"], ep["energy_star"]["im"])
            return ep
    return None


def figure(name, axis=None):
    """Run every series of a preset; returns {label: sweep document}."""
    docs = json.loads(_core.figure(name, axis or ""))
    return {doc.pop("label"): _with_energies(doc) for doc in docs}


def preset_names():
    return list(_core.preset_names())


def preset_jobs(name, axis=None):
    return json.loads(_core.preset_jobs(name, axis or ""))


def potential(spec, x):
    """V(x) without the delta terms; +inf outside rigid walls."""
    return _core.potential(_dump(spec), float(x))


def characteristic(spec, energy, dddp_form="rederived"):
    """The characteristic function F(E) whose zeros are the bound states."""
    return _core.characteristic(_dump(spec), complex(energy), dddp_form)


def config_hash(config):
    return _core.config_hash(_dump(config))
