"""Canonical JSON for decompositions.

Schema:
    {"params": {"lambda": L, "k": K, "u": U, "g": G},
     "factors": [{"hole": int|null, "cycles": [[[part, slot], ...], ...]}],
     "provenance": ["tag", ...]}

Vertices are 2-element arrays, cycles are stored in canonical rotation and
sorted within a factor, and the byte encoding is fixed (sorted keys, compact
separators) so identical decompositions serialize identically.
"""

from __future__ import annotations

import json
from typing import Any

from .graphs import Decomposition, MultiGraph, ParameterError, PartialFactor, tensor_complete


def factor_to_obj(factor: PartialFactor) -> dict[str, Any]:
    return {
        "hole": factor.hole,
        "cycles": [[[p, s] for (p, s) in cyc] for cyc in factor.cycles],
    }


def factor_from_obj(obj: dict[str, Any], cycle_length: int) -> PartialFactor:
    cycles = [tuple((int(p), int(s)) for p, s in cyc) for cyc in obj["cycles"]]
    hole = obj["hole"]
    return PartialFactor.build(cycle_length, None if hole is None else int(hole), cycles)


def decomposition_to_obj(dec: Decomposition, params) -> dict[str, Any]:
    return {
        "params": {"lambda": params.lam, "k": params.k, "u": params.u, "g": params.g},
        "factors": [factor_to_obj(f) for f in dec.factors],
        "provenance": list(dec.provenance),
    }


def decomposition_from_obj(obj: dict[str, Any]):
    """Returns (params dict, Decomposition) for an ARCS JSON document."""
    from .arcs import Params  # local import: serialize stays dependency-light

    raw = obj["params"]
    params = Params(int(raw["lambda"]), int(raw["k"]), int(raw["u"]), int(raw["g"]))
    factors = tuple(factor_from_obj(f, params.k) for f in obj["factors"])
    provenance = tuple(str(t) for t in obj.get("provenance", ()))
    if provenance and len(provenance) != len(factors):
        raise ParameterError("provenance length does not match factor count")
    host = tensor_complete(params.u, params.g, params.lam)
    return params, Decomposition(host, factors, provenance)


def canonical_json_bytes(obj: Any) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode("ascii")


def factors_payload(host: MultiGraph, factors, provenance) -> dict[str, Any]:
    """Cache payload for non-ARCS hosts (block decompositions)."""
    return {
        "host": {"num_parts": host.num_parts, "part_size": host.part_size, "kind": host.kind},
        "factors": [factor_to_obj(f) for f in factors],
        "cycle_lengths": [f.cycle_length for f in factors],
        "provenance": list(provenance),
    }


def factors_from_payload(obj: dict[str, Any]) -> list[PartialFactor]:
    return [factor_from_obj(f, length)
            for f, length in zip(obj["factors"], obj["cycle_lengths"])]
