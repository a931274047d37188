"""Pipeline orchestration and report rendering.

:func:`run_scenario` runs every stage on each sample point of a scenario and
collects the results in a :class:`Report`, a plain nested dict with stable
key order.  :func:`emit_report` renders it as text or JSON.  The JSON schema
is documented in the README.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .bilinear import Subspace
from .connection import (
    ALIASES,
    IDENTITIES,
    THEOREMS,
    PointGeometry,
    check_identities,
    evaluate_theorem,
    gauss_weingarten,
)
from .golden import eigen_split, golden_candidate, is_invariant, verify_golden
from .lightlike import DecompositionError, classify_case, decompose, tangent_frame
from .scalar import ExtScalar, embed_float, float_tolerance, is_zero
from .scenario import Scenario, ScenarioError, builtin_scenario, load_scenario, resolve_checks
from .stclass import InvarianceFailed, d0_invariance, st_classify

__all__ = ["Report", "run_scenario", "emit_report", "verdicts_from_json", "render_scalar"]

SCHEMA_VERSION = 1


def render_scalar(x) -> str:
    """Exact scalars in their text form, floats as decimals."""
    if isinstance(x, float):
        return repr(0.0 if x == 0 else x)
    if isinstance(x, (int, Fraction)):
        return str(ExtScalar(x))
    return str(x)


def _vec(v) -> list:
    return [render_scalar(x) for x in v]


def _mat(m) -> list:
    return [_vec(r) for r in m]


@dataclass
class Report:
    data: dict

    @property
    def verdicts(self) -> dict:
        return self.data["verdicts"]

    @property
    def passed(self) -> bool:
        return self.data["pass"]

    @property
    def errata(self) -> list:
        return self.data["errata"]

    def point(self, i: int = 0) -> dict:
        return self.data["points"][i]


# ------------------------------------------------------------------ claims


def _claim_result(c, sc: Scenario, dec0, cls0, per_point) -> tuple[bool, dict, str]:
    amb = sc.ambient
    g = amb.g
    kind = c["kind"]
    if kind == "golden_coefficient":
        rep = verify_golden(golden_candidate(amb.product, c["value"]), amb.metric)
        fixed = verify_golden(golden_candidate(amb.product, Fraction(1, 2)), amb.metric)
        failing = [k for k, ok in rep.verdicts.items() if not ok]
        detail = {"coefficient": render_scalar(c["value"]), "verdicts": rep.verdicts,
                  "half_coefficient_verdicts": fixed.verdicts}
        msg = (f"P = ({c['value']})(I + r5 F) fails {', '.join(failing)}; "
               f"P = (1/2)(I + r5 F) {'passes' if fixed.ok else 'also fails'}")
        return rep.ok, detail, msg
    if kind == "immersion_pushforward":
        imm = c["immersion"]
        if imm.target_dim != amb.dim:
            return False, {"components": imm.target_dim}, "immersion has the wrong number of components"
        alt = imm.frame(c["point"])
        diffs = [j for j, (a, b) in enumerate(zip(alt, dec0.frame)) if any(not is_zero(x - y) for x, y in zip(a, b))]
        detail = {"pushforward": _mat(alt), "differs_at": [f"d{j + 1}" for j in diffs]}
        try:
            adec = decompose(amb, alt)
            acls = st_classify(amb, adec)
            detail["variant_rad_dim"] = adec.r
            detail["variant_classification"] = acls.kind
            detail["variant_valid"] = adec.is_valid()
        except DecompositionError as exc:
            detail["variant_error"] = str(exc)
        msg = ("pushforward of the printed immersion differs from the listed frame at "
               + ", ".join(detail["differs_at"]) + "; both variants were decomposed")
        return not diffs, detail, msg
    if kind == "immersion_dimension":
        imm = c["immersion"]
        detail = {"components": imm.target_dim, "ambient_dim": amb.dim}
        return imm.target_dim == amb.dim, detail, (
            f"printed immersion has {imm.target_dim} components but the ambient dimension is {amb.dim}")
    if kind == "ltr_witness":
        N = c["vector"]
        pair_rad = [g(xi, N) for xi in dec0.rad.basis]
        detail = {
            "g(rad,N)": _vec(pair_rad),
            "g(N,N)": render_scalar(g(N, N)),
            "g(screen,N)": _vec(g(s, N) for s in dec0.screen.basis),
            "g(stn,N)": _vec(g(z, N) for z in dec0.stn.basis),
        }
        ok = (
            len(pair_rad) == 1 and is_zero(pair_rad[0] - 1)
            and is_zero(g(N, N))
            and all(is_zero(g(s, N)) for s in dec0.screen.basis)
        )
        return ok, detail, f"witness N has g(N,N) = {detail['g(N,N)']}, so it is not null"
    if kind == "vector_consistency":
        vals = c["values"]
        same = all(all(is_zero(a - b) for a, b in zip(vals[0], v)) for v in vals[1:])
        return same, {"values": [_vec(v) for v in vals]}, f"{c['name']} is given {len(vals)} different values"
    if kind == "classification":
        kinds = [p["classification"] for p in per_point]
        ok = all(k == c["value"] for k in kinds)
        return ok, {"claimed": c["value"], "computed": kinds}, (
            f"claimed class {c['value']} but the conditions give {', '.join(sorted(set(kinds)))}")
    if kind == "radical_span":
        sp = Subspace(c["vectors"])
        ok = sp.equals(dec0.rad)
        return ok, {"dim": dec0.r}, "listed radical does not match"
    if kind == "d0_span":
        sp = Subspace(c["vectors"])
        ok = cls0 is not None and sp.equals(cls0.D0)
        detail = {"F_invariant": is_invariant(amb.F, sp)}
        return ok, detail, "listed D0 does not match the computed one"
    if kind == "pairing":
        val = g(c["u"], c["v"])
        return is_zero(val - c["value"]), {"value": render_scalar(val)}, "pairing value does not match"
    raise ScenarioError(f"unknown claim kind {kind!r}")  # pragma: no cover


# ------------------------------------------------------------------ per point


def _decomposition_section(dec) -> dict:
    return {
        "n": dec.n,
        "m": dec.m,
        "r": dec.r,
        "k": dec.k,
        "case": classify_case(dec),
        "ltr_method": dec.ltr_method,
        "frame": _mat(dec.frame),
        "rad": _mat(dec.rad.basis),
        "screen": _mat(dec.screen.basis),
        "ltr": _mat(dec.ltr.basis),
        "stn": _mat(dec.stn.basis),
        "stn_labels": list(dec.stn_labels),
        "gram": {k: _mat(v) for k, v in dec.certificates.items()},
        "invariants": dec.invariants(),
    }


def _nonzero(entries, zt):
    return [{"label": lab, "value": render_scalar(v)} for lab, v in entries if not zt(v)]


def _max_abs(values):
    vals = [abs(v) for v in values if isinstance(v, float)]
    return max(vals) if vals else None


def _identity_section(rep, mode) -> dict:
    res = rep.residuals
    out = {
        "id": rep.id,
        "description": rep.description,
        "verdict": rep.verdict,
        "entries": len(res),
        "nonzero": [
            {"label": lab, "residual": render_scalar(r)}
            for (lab, _, _), r in zip(rep.entries, res)
            if not rep.zero_test(r)
        ],
    }
    if mode == "float":
        out["max_residual"] = _max_abs(res)
    if rep.note:
        out["note"] = rep.note
    return out


def _theorem_section(rep) -> dict:
    zt = rep.zero_test
    out = {
        "id": rep.id,
        "statement": rep.statement,
        "applicable": True,
        "geometric_holds": rep.geometric_holds,
        "condition_holds": rep.condition_holds,
        "literal_holds": rep.literal_holds,
        "agreement": rep.agreement,
        "geometric_nonzero": _nonzero(rep.geometric, zt),
        "condition_nonzero": _nonzero(rep.condition, zt),
    }
    if rep.reading:
        out["reading"] = rep.reading
    if "disjuncts" in rep.extra:
        out["disjuncts"] = {
            k: all(zt(v) for _, v in vals) for k, vals in sorted(rep.extra["disjuncts"].items())
        }
    if "screen_block_reading" in rep.extra:
        alt = all(zt(v) for _, v in rep.extra["screen_block_reading"])
        out["screen_block_reading"] = {
            "holds": alt,
            "agreement": alt == rep.geometric_holds,
            "nonzero": _nonzero(rep.extra["screen_block_reading"], zt),
        }
    return out


def _requested(checks):
    ids, thms = [], []
    for c in checks:
        c = ALIASES.get(c, c)
        if c in IDENTITIES and c not in ids:
            ids.append(c)
        elif c in THEOREMS and c not in thms:
            thms.append(c)
    return ids, thms


def _run_point(sc: Scenario, point, mode, ids, thms, verdicts, tag):
    out: dict = {"point": _vec(point)}
    amb = sc.ambient
    geom = None
    try:
        if ids or thms:
            geom = PointGeometry(amb, sc.immersion, point, screen=sc.screen, mode=mode)
            dec, cls = geom.dec, geom.cls
        else:
            conv = None if mode == "exact" else embed_float
            work = amb if mode == "exact" else amb.as_float()
            pt = tuple(ExtScalar.coerce(x) for x in point) if mode == "exact" else tuple(conv(x) for x in point)
            frame = tangent_frame(sc.immersion, work, pt, conv)
            screen = None
            if sc.screen is not None:
                screen = [
                    tuple(c(pt, conv) if callable(c) else (c if mode == "exact" else conv(c)) for c in row)
                    for row in sc.screen
                ]
            dec = decompose(work, frame, screen)
            cls = st_classify(work, dec)
    except (DecompositionError, ArithmeticError) as exc:
        raise ScenarioError(f"point {[str(x) for x in point]}: {exc}") from exc

    out["decomposition"] = _decomposition_section(dec)
    verdicts[f"{tag}.decomposition"] = all(out["decomposition"]["invariants"].values())
    out["classification"] = cls.kind
    out["evidence"] = dict(cls.evidence)
    out["D0"] = _mat(cls.D0.basis)
    work = dec.ambient
    if cls.kind != "not_screen_transversal":
        try:
            cert = d0_invariance(work, cls)
            ok = cert.ok
        except InvarianceFailed:
            ok = False
        out["D0_invariant"] = ok
        verdicts[f"{tag}.D0"] = ok
        if ok and cls.D0.basis and mode == "exact":
            phi, psi = eigen_split(work.P, cls.D0)
            out["D0_eigen_split"] = [phi.dim, psi.dim]

    if geom is not None:
        out["identities"] = []
        out["theorems"] = []
        table = gauss_weingarten(geom) if ids else None
        if ids:
            reps = {r.id: r for r in check_identities(table, geom)}
            for i in ids:
                sec = _identity_section(reps[i], mode)
                out["identities"].append(sec)
                verdicts[f"{tag}.{i}"] = sec["verdict"]
        for t in thms:
            kind = THEOREMS[t][0]
            if cls.kind != kind:
                out["theorems"].append({"id": t, "statement": THEOREMS[t][1], "applicable": False,
                                        "requires": kind})
                continue
            sec = _theorem_section(evaluate_theorem(geom, t, cls))
            out["theorems"].append(sec)
            verdicts[f"{tag}.{t}"] = sec["agreement"]
    return out, dec, cls


# ------------------------------------------------------------------ pipeline


def _load(source) -> Scenario:
    if isinstance(source, Scenario):
        return source
    s = str(source)
    if s.endswith(".json") or "/" in s:
        return load_scenario(s)
    return builtin_scenario(s)


def run_scenario(source, *, mode: str | None = None, tolerance: float | None = None,
                 checks=None) -> Report:
    """Run the whole pipeline on a scenario (object, file path or built-in id)."""
    sc = _load(source)
    mode = mode or sc.mode
    if mode not in ("exact", "float"):
        raise ScenarioError("mode must be 'exact' or 'float'")
    tol = sc.tolerance if tolerance is None else float(tolerance)
    chosen = sc.checks if checks is None else resolve_checks(checks)
    ids, thms = _requested(chosen)
    token = float_tolerance.set(tol)
    try:
        return _run(sc, mode, tol, ids, thms)
    finally:
        float_tolerance.reset(token)


def _run(sc, mode, tol, ids, thms) -> Report:
    verdicts: dict = {}
    golden = verify_golden(sc.ambient.golden, sc.ambient.metric)
    verdicts["golden"] = golden.ok
    points, exact_dec, exact_cls = [], None, None
    for i, pt in enumerate(sc.points):
        sec, dec, cls = _run_point(sc, pt, mode, ids, thms, verdicts, f"p{i + 1}")
        points.append(sec)
        if i == 0:
            exact_dec, exact_cls = dec, cls
    if mode == "float" and sc.claims:
        # claims are always judged exactly
        frame = tangent_frame(sc.immersion, sc.ambient, tuple(ExtScalar.coerce(x) for x in sc.points[0]))
        exact_dec = decompose(sc.ambient, frame, _exact_screen(sc))
        exact_cls = st_classify(sc.ambient, exact_dec)

    claims, errata = [], {}
    for c in sc.claims:
        holds, detail, msg = _claim_result(c, sc, exact_dec, exact_cls, points)
        claims.append({"id": c["id"], "kind": c["kind"], "holds": holds, "detail": detail})
        if not holds:
            errata.setdefault(c["id"], []).append(msg)

    data = {
        "schema": SCHEMA_VERSION,
        "scenario": sc.name,
        "mode": mode,
        "tolerance": tol if mode == "float" else None,
        "checks": {"identities": ids, "theorems": thms},
        "golden": {"verdicts": golden.verdicts, "ok": golden.ok},
        "points": points,
        "claims": claims,
        "errata": [{"id": k, "notes": errata[k]} for k in sorted(errata)],
        "verdicts": verdicts,
        "pass": all(verdicts.values()),
    }
    return Report(data)


def _exact_screen(sc):
    if sc.screen is None:
        return None
    pt = tuple(ExtScalar.coerce(x) for x in sc.points[0])
    return [tuple(c(pt) if callable(c) else c for c in row) for row in sc.screen]


# ------------------------------------------------------------------ rendering


def emit_report(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.data, indent=2, sort_keys=False) + "\n"
    if fmt != "text":
        raise ValueError("format must be 'text' or 'json'")
    return _text(report.data)


def verdicts_from_json(text: str) -> dict:
    return json.loads(text)["verdicts"]


def _yn(b) -> str:
    return "pass" if b else "FAIL"


def _text(d) -> str:
    lines = [f"scenario: {d['scenario']}  mode: {d['mode']}"
             + (f"  tolerance: {d['tolerance']}" if d["tolerance"] else "")]
    lines.append(f"golden structure: {_yn(d['golden']['ok'])} "
                 + " ".join(f"{k}={'ok' if v else 'no'}" for k, v in d["golden"]["verdicts"].items()))
    for i, p in enumerate(d["points"]):
        dec = p["decomposition"]
        lines.append("")
        lines.append(f"point p{i + 1} = ({', '.join(p['point'])})")
        lines.append(f"  n={dec['n']} m={dec['m']} r={dec['r']} k={dec['k']}  case: {dec['case']}"
                     f"  ltr: {dec['ltr_method']}")
        for name in ("rad", "screen", "ltr"):
            for v in dec[name]:
                lines.append(f"  {name:6s} ({', '.join(v)})")
        for lab, v in zip(dec["stn_labels"], dec["stn"]):
            lines.append(f"  stn    ({', '.join(v)})  [{lab}]")
        bad = [k for k, ok in dec["invariants"].items() if not ok]
        lines.append(f"  decomposition invariants: {_yn(not bad)}" + (f" ({', '.join(bad)})" if bad else ""))
        lines.append(f"  classification: {p['classification']}")
        if "D0_invariant" in p:
            split = p.get("D0_eigen_split")
            lines.append(f"  D0 dim {len(p['D0'])}, P-invariant: {_yn(p['D0_invariant'])}"
                         + (f", eigen split {split[0]}+{split[1]}" if split else ""))
        for sec in p.get("identities", []):
            extra = f"  max |r| = {sec['max_residual']}" if sec.get("max_residual") is not None else ""
            lines.append(f"  {sec['id']:7s} {_yn(sec['verdict'])}  {sec['entries']} {'entry' if sec['entries'] == 1 else 'entries'}{extra}  {sec['description']}")
        for sec in p.get("theorems", []):
            if not sec["applicable"]:
                lines.append(f"  {sec['id']:7s} n/a   needs {sec['requires']}")
                continue
            lines.append(
                f"  {sec['id']:7s} {_yn(sec['agreement'])}  geometric={sec['geometric_holds']} "
                f"condition={sec['condition_holds']} literal={sec['literal_holds']}  {sec['statement']}"
            )
            if "screen_block_reading" in sec:
                alt = sec["screen_block_reading"]
                lines.append(f"          screen-block reading holds={alt['holds']} agreement={alt['agreement']}")
            if "disjuncts" in sec:
                lines.append("          " + " ".join(f"{k}={v}" for k, v in sec["disjuncts"].items()))
    if d["claims"]:
        lines.append("")
        lines.append("claims:")
        for c in d["claims"]:
            lines.append(f"  {c['id']:12s} {c['kind']:22s} {'holds' if c['holds'] else 'does not hold'}")
    if d["errata"]:
        lines.append("")
        lines.append("errata:")
        for e in d["errata"]:
            for note in e["notes"]:
                lines.append(f"  {e['id']}: {note}")
    lines.append("")
    failed = [k for k, v in d["verdicts"].items() if not v]
    lines.append("result: " + ("pass" if d["pass"] else "FAIL (" + ", ".join(failed) + ")"))
    return "\n".join(lines) + "\n"
