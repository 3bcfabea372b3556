"""End-to-end reproduction checks for the non-approximability example."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from . import catalog
from .certificate import to_document
from .charfn import DiscreteDistribution, char_poly, embed, eval_point
from .enclosure import Box2
from .miranda import certified_margin, certify_miranda
from .winding import PolyPath, verify_path_constraints, winding_number, zero_search

PI = math.pi
EXACT_TOL = 1e-12


def fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}i"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


@dataclass
class Check:
    name: str
    claim: str
    location: str
    computed: str
    expected: str
    passed: bool


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    certificates: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, claim, location, computed, expected, passed) -> None:
        self.checks.append(Check(name, claim, location, fmt(computed), expected, bool(passed)))

    def table(self) -> str:
        rows = [("check", "status", "computed", "expected", "location", "claim")]
        for c in self.checks:
            rows.append((c.name, "PASS" if c.passed else "FAIL", c.computed, c.expected,
                         c.location, c.claim))
        widths = [max(len(r[k]) for r in rows) for k in range(5)]
        lines = []
        for r in rows:
            lines.append("  ".join(r[k].ljust(widths[k]) for k in range(5)) + "  " + r[5])
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} "
                     f"({sum(c.passed for c in self.checks)}/{len(self.checks)})")
        return "\n".join(lines)

    def to_document(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [vars(c) for c in self.checks],
            "certificates": self.certificates,
        }


def verify_paper(dist: DiscreteDistribution | None = None, max_depth: int | None = None,
                 seed: int = 20240101) -> VerificationReport:
    """Run every reproduction check on ``dist`` (default: the built-in mu).

    ``max_depth`` overrides all subdivision depths (Miranda 14, paths 12,
    winding 16, margin search 14).
    """
    dist = dist or catalog.mu()
    phi = char_poly(dist)
    rep = VerificationReport()
    depth = lambda d: d if max_depth is None else max_depth  # noqa: E731
    rng = random.Random(seed)
    sign_certs = []

    # boundary of [-pi, pi]^2
    worst = 0.0
    ys = [-PI + 2 * PI * k / 99 for k in range(100)]
    for y in ys:
        for p in ((PI, y), (-PI, y), (y, PI), (y, -PI)):
            worst = max(worst, abs(eval_point(phi, p) - complex(-1 / 3, 0)))
    rep.add("boundary-identity", "phi = -1/3 on the boundary of [-pi,pi]^2",
            "Theorem, first proof", worst, f"max |phi + 1/3| <= {EXACT_TOL:g}", worst <= EXACT_TOL)

    anchors = [
        ("anchor-A1", (0.0, 0.0), "re", 1.0, ">= 1/10"),
        ("anchor-B1", (PI, -PI), "re", -1 / 3, "<= -1/10"),
        ("anchor-A2", (PI / 2, PI / 2), "im", 2 / 3, ">= 1/10"),
        ("anchor-B2", (-PI / 2, -PI / 2), "im", -2 / 3, "<= -1/10"),
    ]
    for name, p, comp, exact, rel in anchors:
        z = eval_point(phi, p)
        val = z.real if comp == "re" else z.imag
        ok = abs(val - exact) <= EXACT_TOL and (val >= 0.1 if ">=" in rel else val <= -0.1)
        rep.add(name, f"{comp} phi({fmt(p[0])}, {fmt(p[1])}) {rel}",
                "Theorem, first proof", val, f"{fmt(exact)} {rel}", ok)

    psi = catalog.psi()
    for margin in (0.025, 0.05):
        cert = certify_miranda(phi, psi, margin, depth(14))
        if cert:
            rep.certificates[f"miranda-{margin}"] = to_document(cert)
            sign_certs.extend(cert.edge_certificates.values())
            got = f"certified ({cert.orientation.label()}, depth {cert.depth_used})"
        else:
            got = f"INCONCLUSIVE: {cert.reason}"
        rep.add(f"miranda-{margin}", f"robust zero in psi([0,1]^2) with radius {margin}",
                "Theorem, second proof", got, "certificate", bool(cert))

    m = certified_margin(phi, psi, depth(14))
    oracle = catalog.edge_margin_oracle(phi, psi)
    rep.add("margin-bracket", "best certified Miranda radius for psi", "Theorem, second proof",
            m, f"in [0.05, {fmt(oracle)}] (sampled edge minimum)", 0.05 <= m <= oracle)

    box = Box2.from_bounds(-PI, PI, -PI, PI)
    clusters = zero_search(phi, box, 1e-6)
    errs = []
    for z in catalog.MU_ZEROS:
        d = [math.dist(c.center, z) for c in clusters]
        errs.append(min(d) if d else math.inf)
    ok = len(clusters) == 2 and max(errs) <= 1e-6
    rep.add("zero-isolation", "exactly two zero clusters in [-pi,pi]^2", "zeros of phi",
            f"{len(clusters)} clusters, center error {fmt(max(errs))}",
            "2 clusters, error <= 1e-06", ok)

    for k, z in enumerate(catalog.MU_ZEROS):
        sq = Box2.from_bounds(z[0] - 0.1, z[0] + 0.1, z[1] - 0.1, z[1] + 0.1)
        w = winding_number(phi, PolyPath.box_boundary(sq), depth(16))
        ok = bool(w) and abs(w.winding) == 1 and w.modulus_floor > 0
        if w:
            rep.certificates[f"winding-zero-{k}"] = to_document(w)
        got = f"winding {w.winding}, floor {fmt(w.modulus_floor)}" if w else "INCONCLUSIVE"
        rep.add(f"winding-zero-{k}", "nonzero degree around an isolated zero", "zeros of phi",
                got, "|winding| = 1, floor > 0", ok)

    w = winding_number(phi, PolyPath.box_boundary(Box2.from_bounds(-0.5, 0.5, -0.5, 0.5)), depth(16))
    ok = bool(w) and w.winding == 0 and w.modulus_floor >= 0.5
    if w:
        rep.certificates["winding-origin"] = to_document(w)
    rep.add("winding-origin", "zero-free square around the origin", "zeros of phi",
            f"winding {w.winding}, floor {fmt(w.modulus_floor)}" if w else "INCONCLUSIVE",
            "winding 0, floor >= 0.5", ok)

    w = winding_number(phi, PolyPath(tuple(psi.corners()), closed=True), depth(16))
    center = psi(0.5, 1 / 6)
    inside = math.dist(center, catalog.MU_ZEROS[0]) <= EXACT_TOL and psi.contains(center)
    ok = bool(w) and abs(w.winding) == 1 and inside
    if w:
        rep.certificates["winding-psi"] = to_document(w)
    rep.add("winding-psi", "mapped square carries degree +-1 and contains psi(1/2,1/6)",
            "Theorem, second proof",
            f"winding {w.winding}" if w else "INCONCLUSIVE", "|winding| = 1", ok)

    for name, path, cons in (("path-gamma-down", catalog.GAMMA_DOWN, catalog.gamma_down_constraints()),
                             ("path-gamma-right", catalog.GAMMA_RIGHT, catalog.gamma_right_constraints())):
        res = verify_path_constraints(phi, path, cons, depth(12))
        if res:
            sign_certs.extend(res)
            for k, c in enumerate(res):
                rep.certificates[f"{name}-{k}"] = to_document(c)
            got = f"{len(res)} certificates, depth {max(c.depth_used for c in res)}"
        else:
            got = f"INCONCLUSIVE: {res.reason}"
        rep.add(name, "path stays in the level-1/10 sets", "Theorem, first proof", got,
                f"{len(cons)} certificates", bool(res))

    sigma = char_poly(embed(dist, 4, [1, 2]))
    worst = 0.0
    for _ in range(1000):
        x = [rng.uniform(-10, 10) for _ in range(4)]
        worst = max(worst, abs(eval_point(sigma, x) - eval_point(phi, x[:2])))
    rep.add("corollary-slice", "embedded law depends only on its first two coordinates",
            "Corollary", worst, f"<= {EXACT_TOL:g}", worst <= EXACT_TOL)

    # spot-check every sign certificate produced above
    bad = total = 0
    for cert in sign_certs:
        for piece in cert.pieces:
            for _ in range(200):
                z = eval_point(phi, piece.sample(rng))
                v = z.real if cert.target == "re" else z.imag
                total += 1
                bad += not (v > cert.threshold if cert.direction == "ge" else v < cert.threshold)
    rep.add("certificate-sampling", "sampled points satisfy every certified inequality",
            "soundness", f"{total - bad}/{total}", "all", bad == 0 and total > 0)
    return rep

