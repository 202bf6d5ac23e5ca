"""JSON serialization of results and validation against the shipped schema."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any, Optional

import jsonschema

from .artrans import AlmostSplitCertificate, ARQuiver
from .extensions import ExtClass, ShortExact, class_to_ses
from .infrep import DtrVerdict
from .repcore import DecompositionReport, Rep, RepMorphism
from .subcat import Approximation, ClosureReport


def rep_json(r: Rep) -> dict:
    return {
        "dims": {v: int(r.dims[v]) for v in r.quiver.vertices},
        "mats": {a.id: r.mats[a.id].tolist() for a in r.quiver.arrows},
        "prime": int(r.p),
    }


def morphism_json(f: RepMorphism) -> dict:
    return {"comps": {v: f.comps[v].tolist() for v in f.src.quiver.vertices}}


def ses_json(s: ShortExact) -> dict:
    return {"X": rep_json(s.X), "Y": rep_json(s.Y), "Z": rep_json(s.Z),
            "i": morphism_json(s.i), "p": morphism_json(s.p)}


def class_json(c: ExtClass, realization: Optional[ShortExact] = None) -> dict:
    return {"class": [int(x) for x in c.coords], "space_dim": int(c.space.dim),
            "realization": ses_json(realization or class_to_ses(c))}


def certificate_json(cert: AlmostSplitCertificate) -> dict:
    return {
        "verdict": "valid" if cert.valid else "invalid",
        "witnesses": list(cert.failures),
        "non_split": bool(cert.non_split),
        "end_local": [bool(x) for x in cert.end_local],
        "socle": bool(cert.socle),
        "summands_ok": bool(cert.summands_ok),
        "right_factorizations": cert.ras_report,
        "left_factorizations": cert.las_report,
    }


def decomposition_json(d: DecompositionReport) -> dict:
    return {
        "parts": [{"rep": rep_json(p.rep), "multiplicity": p.multiplicity, "verdict": p.verdict}
                  for p in d.parts],
        "iso": morphism_json(d.iso),
    }


def approximation_json(a: Approximation) -> dict:
    return {"morphism": morphism_json(a.f), "source": rep_json(a.f.src), "target": rep_json(a.f.dst),
            "summands": [list(s.dimvec) for s in a.summands], "minimal": bool(a.minimal)}


def closure_json(c: ClosureReport) -> dict:
    return {"verdict": c.verdict, "sampled": bool(c.sampled), "witnesses": [c.witness] if c.witness else []}


def dtr_verdict_json(v: DtrVerdict) -> dict:
    out = {"kind": v.kind, "depth": v.depth, "stabilization_index": v.stabilization_index,
           "stable_dims": dict(sorted(v.stable_dims.items())),
           "certificate": {k: bool(b) for k, b in sorted(v.certificate.items())}}
    if v.rep is not None:
        out["rep"] = rep_json(v.rep)
    if v.ray_witness is not None:
        out["ray_witness"] = v.ray_witness
        out["stable_dim"] = v.stable_dim
    return out


def ar_quiver_json(g: ARQuiver) -> dict:
    return {
        "vertices": [{"name": n.name, "dims": list(n.rep.dimvec), "orbit": n.orbit, "power": n.power}
                     for n in g.nodes],
        "arrows": [{"source": a, "target": b, "multiplicity": m} for a, b, m in g.arrows],
        "tau": [{"source": z, "target": x} for z, x in g.tau],
        "meshes": [{"left": x, "middle": list(mid), "right": z} for x, mid, z in g.meshes],
    }


@lru_cache(maxsize=1)
def schema() -> dict:
    return json.loads(resources.files("almostsplit").joinpath("report.schema.json").read_text())


def validate(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if the report does not match the schema."""
    jsonschema.validate(report, schema())


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(obj: Any, indent: int = 0) -> str:
    """Plain indented rendering of a report for humans."""
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _is_matrix(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        lines = []
        for v in obj:
            if isinstance(v, (dict, list)) and v and not _is_matrix(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
        return "\n".join(lines)
    return pad + _scalar(obj)


def _is_matrix(v) -> bool:
    return isinstance(v, list) and all(isinstance(x, (int, list)) and not isinstance(x, bool) for x in v) \
        and all(not isinstance(x, list) or all(isinstance(y, int) for y in x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)
