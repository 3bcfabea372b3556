"""Certificate documents: JSON with every float written in hexadecimal.

A document is self-contained: it carries the polynomial, the regions and
every leaf of the subdivision.  :func:`check_document` re-verifies it by
replaying the deterministic bisection to confirm that the leaves tile each
region and recomputing each leaf's enclosure.  It never searches.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .charfn import TrigPolynomial
from .enclosure import Patch, PatchEvaluator, SignCertificate, satisfies
from .errors import CertificateError
from .interval import Interval
from .miranda import AffineSquareMap, MirandaCertificate, Orientation, poly_fingerprint
from .winding import PolyPath, WindingCertificate, wrap_angle, half_plane_witness

FORMAT = "robustzero-certificate/1"
_MAX_REPLAY_DEPTH = 200


def hexf(x: float) -> str:
    return float(x).hex()


def unhex(s) -> float:
    if isinstance(s, (int, float)):
        return float(s)
    return float.fromhex(s)


def _iv(iv: Interval) -> list[str]:
    return [hexf(iv.lo), hexf(iv.hi)]


def _un_iv(pair) -> Interval:
    return Interval(unhex(pair[0]), unhex(pair[1]))


def _poly_doc(poly: TrigPolynomial) -> dict:
    return {
        "dim": poly.dim,
        "terms": [[hexf(w), [hexf(c) for c in a]] for w, a in poly.terms],
        "fingerprint": poly_fingerprint(poly),
    }


def _un_poly(doc) -> TrigPolynomial:
    poly = TrigPolynomial(int(doc["dim"]),
                          tuple((unhex(w), tuple(unhex(c) for c in a)) for w, a in doc["terms"]))
    if "fingerprint" in doc and doc["fingerprint"] != poly_fingerprint(poly):
        raise CertificateError("polynomial fingerprint does not match its terms")
    return poly


def _patch_doc(p: Patch) -> dict:
    vec = lambda v: [_iv(v[0]), _iv(v[1])]  # noqa: E731
    return {"base": vec(p.base), "u": vec(p.u), "v": vec(p.v), "s": _iv(p.s), "t": _iv(p.t)}


def _un_patch(doc) -> Patch:
    vec = lambda v: (_un_iv(v[0]), _un_iv(v[1]))  # noqa: E731
    return Patch(vec(doc["base"]), vec(doc["u"]), vec(doc["v"]), _un_iv(doc["s"]), _un_iv(doc["t"]))


def _sign_body(cert: SignCertificate) -> dict:
    return {
        "target": cert.target,
        "threshold": hexf(cert.threshold),
        "direction": cert.direction,
        "depth_used": cert.depth_used,
        "pieces": [_patch_doc(p) for p in cert.pieces],
        "leaves": [
            {"piece": lf.piece, "depth": lf.depth, "s": _iv(lf.s), "t": _iv(lf.t),
             "re": _iv(lf.enclosure.re), "im": _iv(lf.enclosure.im)}
            for lf in cert.leaves
        ],
    }


def to_document(cert) -> dict:
    """Serializable dict for a sign, Miranda or winding certificate."""
    if isinstance(cert, SignCertificate):
        doc = {"kind": "sign", "operation": "certify_sign", **_sign_body(cert)}
    elif isinstance(cert, MirandaCertificate):
        o = cert.orientation
        doc = {
            "kind": "miranda",
            "operation": "certify_miranda",
            "map": {k: [hexf(c) for c in getattr(cert.map, k)] for k in ("base", "u", "v")},
            "margin": hexf(cert.margin),
            "max_depth": cert.max_depth,
            "depth_used": cert.depth_used,
            "orientation": {"re_axis": o.re_axis, "re_sign": o.re_sign, "im_sign": o.im_sign,
                            "label": o.label()},
            "edges": {name: _sign_body(c) for name, c in sorted(cert.edge_certificates.items())},
        }
    elif isinstance(cert, WindingCertificate):
        doc = {
            "kind": "winding",
            "operation": "winding_number",
            "path": {"vertices": [[hexf(x), hexf(y)] for x, y in cert.path.vertices],
                     "closed": cert.path.closed},
            "winding": cert.winding,
            "modulus_floor": hexf(cert.modulus_floor),
            "arcs": [{"segment": a.segment, "s": _iv(a.s), "re": _iv(a.enclosure.re),
                      "im": _iv(a.enclosure.im), "angle": hexf(a.angle)} for a in cert.arcs],
        }
    else:
        raise TypeError(f"cannot serialize {type(cert).__name__}")
    return {"format": FORMAT, "poly": _poly_doc(cert.poly), **doc}


def dumps(doc) -> str:
    if not isinstance(doc, dict):
        doc = to_document(doc)
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def write_certificate(cert, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(cert))


def load_document(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"line {exc.lineno}: {exc.msg}") from exc


# -- re-checking ------------------------------------------------------------

@dataclass
class CheckResult:
    ok: bool = True
    messages: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.messages.append(msg)

    def __bool__(self) -> bool:
        return self.ok


def _replay_tiling(root: Patch, leaves: list[tuple[Interval, Interval]]) -> str | None:
    """Confirm ``leaves`` are the DFS-ordered leaves of a bisection of ``root``."""
    stack = [(root, 0)]
    k = 0
    while stack:
        node, depth = stack.pop()
        if k >= len(leaves):
            return "leaves do not cover the region"
        s, t = leaves[k]
        if node.s == s and node.t == t:
            k += 1
            continue
        if not (node.s.contains(s) and node.t.contains(t)) or depth >= _MAX_REPLAY_DEPTH:
            return f"leaf {k} is not part of the bisection of its region"
        left, right = node.split()
        stack.append((right, depth + 1))
        stack.append((left, depth + 1))
    if k != len(leaves):
        return "extra leaves outside the region"
    return None


def _check_sign_body(poly: TrigPolynomial, body: dict, result: CheckResult, label: str) -> list[Patch]:
    target, direction = body["target"], body["direction"]
    if target not in ("re", "im") or direction not in ("ge", "le"):
        result.fail(f"{label}: bad target/direction")
        return []
    thr = unhex(body["threshold"])
    pieces = [_un_patch(p) for p in body["pieces"]]
    by_piece: dict[int, list] = {i: [] for i in range(len(pieces))}
    for lf in body["leaves"]:
        i = int(lf["piece"])
        if i not in by_piece:
            result.fail(f"{label}: leaf refers to missing piece {i}")
            return pieces
        by_piece[i].append((_un_iv(lf["s"]), _un_iv(lf["t"])))
    for i, piece in enumerate(pieces):
        err = _replay_tiling(piece, by_piece[i])
        if err:
            result.fail(f"{label}, piece {i}: {err}")
            continue
        ev = PatchEvaluator(poly, piece)
        for s, t in by_piece[i]:
            enc = ev.enclose(s, t)
            comp = enc.re if target == "re" else enc.im
            if not satisfies(comp, thr, direction):
                result.fail(f"{label}, piece {i}: leaf s={s!r} t={t!r} does not satisfy {direction} {thr!r}")
                break
    return pieces


def check_document(doc: dict) -> CheckResult:
    """Re-verify a certificate document from scratch."""
    result = CheckResult()
    try:
        if doc.get("format") != FORMAT:
            result.fail(f"unknown format {doc.get('format')!r}")
            return result
        poly = _un_poly(doc["poly"])
        kind = doc["kind"]
        if kind == "sign":
            _check_sign_body(poly, doc, result, "sign")
        elif kind == "miranda":
            _check_miranda(poly, doc, result)
        elif kind == "winding":
            _check_winding(poly, doc, result)
        else:
            result.fail(f"unknown certificate kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        result.fail(f"malformed certificate: {exc}")
    return result


def _check_miranda(poly: TrigPolynomial, doc: dict, result: CheckResult) -> None:
    m = doc["map"]
    amap = AffineSquareMap(*(tuple(unhex(c) for c in m[k]) for k in ("base", "u", "v")))
    margin = unhex(doc["margin"])
    if not margin > 0:
        result.fail("margin must be positive")
    o = doc["orientation"]
    orient = Orientation(o["re_axis"], int(o["re_sign"]), int(o["im_sign"]))
    edges = doc["edges"]
    for edge, comp, thr, direction in orient.conditions(margin):
        body = edges.get(edge)
        if body is None:
            result.fail(f"edge {edge} missing")
            continue
        if (body["target"], body["direction"], unhex(body["threshold"])) != (comp, direction, thr):
            result.fail(f"edge {edge}: condition does not match the orientation")
            continue
        pieces = _check_sign_body(poly, body, result, f"edge {edge}")
        if pieces != [amap.edge(edge)]:
            result.fail(f"edge {edge}: region is not the mapped edge")


def _check_winding(poly: TrigPolynomial, doc: dict, result: CheckResult) -> None:
    p = doc["path"]
    path = PolyPath(tuple((unhex(x), unhex(y)) for x, y in p["vertices"]), bool(p["closed"]))
    if not path.closed:
        result.fail("winding path must be closed")
        return
    segs = path.segments
    arcs = doc["arcs"]
    angles = []
    floor = math.inf
    for index, seg in enumerate(segs):
        patch = seg.as_patch()
        mine = [_un_iv(a["s"]) for a in arcs if int(a["segment"]) == index]
        err = _replay_tiling(patch, [(s, patch.t) for s in mine])
        if err:
            result.fail(f"segment {index}: {err}")
            return
        ev = PatchEvaluator(poly, patch)
        for s in mine:
            enc = ev.enclose(s, patch.t)
            theta = half_plane_witness(enc)
            if theta is None:
                result.fail(f"segment {index}: arc {s!r} has no half-plane witness")
                return
            angles.append(theta)
            floor = min(floor, enc.abs_lower())
    if [int(a["segment"]) for a in arcs] != sorted(int(a["segment"]) for a in arcs):
        result.fail("arcs are not in path order")
        return
    total = 0.0
    for k, a in enumerate(angles):
        step = wrap_angle(angles[(k + 1) % len(angles)] - a)
        if abs(step) >= math.pi / 2:
            result.fail(f"ambiguous angle step after arc {k}")
            return
        total += step
    turns = total / (2 * math.pi)
    if abs(turns - round(turns)) > 1e-6 or round(turns) != int(doc["winding"]):
        result.fail(f"recomputed winding {turns!r} != recorded {doc['winding']}")
    if unhex(doc["modulus_floor"]) > floor:
        result.fail("recorded modulus floor exceeds the recomputed bound")
