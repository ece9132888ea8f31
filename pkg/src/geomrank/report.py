"""Deterministic JSON reports (schema 1).

Keys are sorted, integers outside the signed 64-bit range become decimal
strings, rationals become ``"p/q"`` strings and floats are rounded to six
places, so the same computation always yields the same bytes.
"""

from __future__ import annotations

import json
from enum import Enum
from fractions import Fraction

from .bounds import BoundReport
from .catalog import identify
from .classifier import GR2Class
from .field import ExactMatrix
from .genericity import GenericityFlags, MlRanks
from .grank import GRReport, StrataProfile
from .tensor import Tensor3

SCHEMA = 1
_INT64 = 2**63


def jsonable(obj):
    """Convert report pieces to plain JSON values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Enum):
        return obj.value if isinstance(obj.value, str) else obj.name
    if isinstance(obj, int):
        return obj if -_INT64 <= obj < _INT64 else str(obj)
    if isinstance(obj, Fraction):
        return jsonable(obj.numerator) if obj.denominator == 1 else str(obj)
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, ExactMatrix):
        return [[jsonable(x) for x in row] for row in obj.rows]
    if isinstance(obj, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(report: dict) -> bytes:
    return (json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def tensor_section(T: Tensor3) -> dict:
    return {"dims": list(T.dims), "entries": len(T), "catalog_id": identify(T)}


def mlranks_section(ml: MlRanks) -> dict:
    return {"A": ml.ml_A, "B": ml.ml_B, "C": ml.ml_C}


def flags_section(flags: GenericityFlags) -> dict:
    return flags.as_dict()


def profile_section(profile: StrataProfile) -> dict:
    n = len(profile.counts) - 1
    return {
        "axis": profile.axis.name,
        "prime": profile.prime,
        "histogram": list(profile.counts),
        "stratum_counts": {j: profile.stratum_count(j) for j in range(n + 1)},
    }


def gr_section(rep: GRReport) -> dict:
    pairings = {}
    for key, pr in rep.pairings.items():
        pairings[key] = {
            "enumerated": pr.enumerated.name,
            "direct_dimension": pr.direct.dimension,
            "direct_certified": pr.direct.certified,
            "slope_estimates": list(pr.direct.slope_estimates),
            "corrected_estimates": list(pr.direct.corrected_estimates),
            "gr_direct": pr.gr_direct,
            "gr_stratified": pr.gr_stratified,
            "gr": pr.gr,
            "certified": pr.certified,
        }
    return {
        "gr": rep.gr,
        "gr_ab": rep.gr_ab,
        "gr_ac": rep.gr_ac,
        "gr_bc": rep.gr_bc,
        "certified": rep.certified,
        "strata_dims": rep.strata_dims,
        "max_stratum": {"axis": rep.max_stratum[0], "j": rep.max_stratum[1]},
        "flag_excess": rep.flag_excess,
        "primes": list(rep.primes),
        "dropped_primes": list(rep.dropped_primes),
        "pairings": pairings,
    }


def strata_section(rep: GRReport) -> dict:
    hist = {
        name: {an_p.prime: list(an_p.counts) for an_p in an.profiles} for name, an in rep.axes.items()
    }
    sigma = {key: dict(pr.sigma_hat) for key, pr in rep.pairings.items()}
    how = {name: {s.j: s.how for s in an.strata} for name, an in rep.axes.items()}
    return {"histograms": hist, "sigma_hat": sigma, "methods": how}


def bounds_section(rep: BoundReport) -> dict:
    return {
        "best": rep.best,
        "known_rank": rep.known_rank,
        "consistent": rep.consistent,
        "permutation": list(rep.permutation),
        "skipped": rep.skipped,
        "bounds": [
            {"value": b.value, "source": b.source, "witness": b.witness, "conditional": b.conditional}
            for b in rep.bounds
        ],
    }


def classification_section(cls: GR2Class) -> dict:
    out = {"variant": cls.variant, "axis": None if cls.axis is None else cls.axis.name}
    if cls.witness is not None:
        out["permutation"] = list(cls.permutation)
        out["witness"] = {"g_A": cls.witness.g_A, "g_B": cls.witness.g_B, "g_C": cls.witness.g_C}
    return out


def build_report(T: Tensor3, **sections) -> dict:
    """Top-level report; sections not computed are null."""
    report = {
        "schema": SCHEMA,
        "tensor": tensor_section(T),
        "mlranks": None,
        "flags": None,
        "gr": None,
        "strata": None,
        "bounds": None,
        "classification": None,
        "timing": None,
        "budget": None,
        "warnings": [],
    }
    unknown = set(sections) - set(report)
    if unknown:
        raise KeyError(f"unknown report sections {sorted(unknown)}")
    report.update(sections)
    return report
