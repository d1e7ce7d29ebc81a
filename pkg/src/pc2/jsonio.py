"""JSON views of the workbench's result objects.

Floats serialize through ``repr`` (shortest round-trip form, up to 17
significant digits), so files re-read bit-identically.
"""

from __future__ import annotations

import json
from typing import Any

from .cover import CoverSolution
from .geometry import Point2
from .interstitium import (
    CoverCertificate,
    HandicapResult,
    TilingCertificate,
    TranslateSet,
    TranslateSearchResult,
)
from .lemmas import FrameReport, Lemma1Report, Lemma2Sweep, Lemma3Report


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def point_list(points) -> list[list[float]]:
    return [[p.x, p.y] for p in points]


def points_from(data) -> list[Point2]:
    return [Point2(x, y) for x, y in data]


def load_point_set(text: str) -> list[Point2]:
    """Accepts either a bare point-set file or a configuration file."""
    data = json.loads(text)
    if isinstance(data, dict) and "points" in data:
        return points_from(data["points"])
    if isinstance(data, list):
        return points_from(data)
    raise ValueError("no point list found in input")


def translate_set_to_dict(ts: TranslateSet) -> dict:
    return {"translates": point_list(ts.translates)}


def translate_set_from_dict(data: dict) -> TranslateSet:
    return TranslateSet.from_points(points_from(data["translates"]))


def certificate_to_dict(cert: CoverCertificate) -> dict:
    out = {
        "status": cert.status,
        "depth": cert.depth,
        "margin": cert.margin,
        "leaves": cert.leaves,
        "max_depth_reached": cert.max_depth_reached,
    }
    if cert.witness is not None:
        out["witness"] = [cert.witness.x, cert.witness.y]
    if cert.witness_box is not None:
        out["witness_box"] = list(cert.witness_box)
    if cert.frontier:
        out["frontier"] = [list(b) for b in cert.frontier]
    return out


def tiling_to_dict(cert: TilingCertificate) -> dict:
    out = {
        "covered": cert.covered,
        "triangles": cert.triangles,
        "vertices_checked": cert.vertices_checked,
    }
    if cert.witness is not None:
        out["witness"] = list(cert.witness)
    return out


def handicap_to_dict(res: HandicapResult) -> dict:
    out: dict[str, Any] = {"coverable": res.coverable, "decided": res.decided}
    if res.translate is not None:
        out["translate"] = [res.translate.x, res.translate.y]
    if res.certificate is not None:
        out["certificate"] = certificate_to_dict(res.certificate)
    return out


def solution_to_dict(sol: CoverSolution) -> dict:
    return {
        "status": sol.status,
        "centers": point_list(sol.centers),
        "assignment": sol.assignment,
        "uncovered": sol.uncovered,
        "best_uncovered_count": sol.best_uncovered_count,
        "attempts": sol.attempts,
    }


def search_to_dict(res: TranslateSearchResult) -> dict:
    out = {
        "translates": point_list(res.translates.translates),
        "uncovered_area": res.uncovered_area,
        "uncovered_fraction": res.uncovered_fraction,
        "uncovered_samples": res.uncovered_samples,
        "samples": res.samples,
        "moves": res.moves,
    }
    if res.certificate is not None:
        out["certificate"] = certificate_to_dict(res.certificate)
    return out


def lemma1_to_dict(rep: Lemma1Report) -> dict:
    return {
        "lemma": 1,
        "trials": rep.trials,
        "arc_checks": rep.arc_checks,
        "failures": rep.failures,
        "max_interval": rep.max_interval,
        "passed": rep.passed,
    }


def lemma2_to_dict(sweep: Lemma2Sweep) -> dict:
    return {
        "lemma": 2,
        "grid": sweep.grid,
        "min_arc": sweep.min_arc,
        "argmin": [sweep.argmin.x, sweep.argmin.y],
        "minima": point_list(sweep.minima[:64]),
        "passed": sweep.passed,
    }


def lemma3_to_dict(rep: Lemma3Report) -> dict:
    return {
        "lemma": 3,
        "d": rep.d,
        "trials": rep.trials,
        "failures": [list(f) for f in rep.failures],
        "witness_center": list(rep.witness_center),
        "witness_distance": rep.witness_distance,
        "spacing_ratio": rep.spacing_ratio,
        "passed": rep.passed,
    }


def frame_to_dict(rep: FrameReport) -> dict:
    return {
        "checks": [
            {"name": c.name, "value": c.value, "expected": c.expected, "ok": c.ok}
            for c in rep.checks
        ],
        "passed": rep.passed,
    }
