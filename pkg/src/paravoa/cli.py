"""Command-line front end: config ingestion, dispatch, JSON reports.

Machine output is a single JSON document on stdout; --pretty adds a human
summary on stderr.  Exit codes: 0 all checks pass, 1 verification failure,
2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from importlib import resources
from typing import Optional

from .exactnum import QuadScalar
from .fock import FULL_L, FockSpace, FockState, enumerate_basis
from .lattice import GramLattice
from .monoid import (
    MonoidDescriptor,
    PreconditionViolated,
    borel_in,
    classify,
    member,
    saturate_witnesses,
)
from .modrep import (
    Selector,
    c1_decide,
    c1_quotient_dims,
    character,
    check_tensor_character,
    fusion,
    irreducibles,
)
from .vertexops import (
    TruncationCtx,
    check_commutator,
    check_ideal,
    check_phi_hom,
)
from .zhu import nilpotency_certificate

__all__ = ["main", "SessionConfig", "ConfigError"]


class ConfigError(ValueError):
    pass


class SessionConfig:
    def __init__(self, obj: dict, source: str):
        try:
            self.lattice = GramLattice.from_json(obj["lattice"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{source}: bad lattice spec: {exc}") from exc
        self.descriptors: dict = {}
        for name, d in obj.get("descriptors", {}).items():
            try:
                desc = MonoidDescriptor.from_json(d, self.lattice)
                desc.validate(self.lattice)
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"{source}: descriptor {name!r}: {exc}") from exc
            self.descriptors[name] = desc
        trunc = obj.get("truncation", {})
        self.max_degree = int(trunc.get("maxDegree", 6))
        self.box_radius = int(obj.get("boxRadius", 8))
        self.seed = int(obj.get("seed", 0))
        self.source = source

    def ctx(self) -> TruncationCtx:
        return TruncationCtx(self.max_degree)

    def descriptor(self, name: str) -> MonoidDescriptor:
        if name not in self.descriptors:
            raise ConfigError(
                f"unknown descriptor {name!r}; config has {sorted(self.descriptors)}"
            )
        return self.descriptors[name]


def load_config(spec: str) -> SessionConfig:
    """Load a config from a path, or a bundled name like 'a2' / 'diag22'."""
    bundled = resources.files("paravoa").joinpath(f"configs/{spec}.json")
    if "/" not in spec and not spec.endswith(".json") and bundled.is_file():
        text, source = bundled.read_text(), f"bundled:{spec}"
    else:
        try:
            with open(spec) as f:
                text = f.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {spec!r}: {exc}") from exc
        source = spec
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{source}: JSON parse error at line {exc.lineno}, col {exc.colno}: {exc.msg}"
        ) from exc
    return SessionConfig(obj, source)


def parse_scalar(s: str, D: int) -> QuadScalar:
    """'a' or 'a~b' meaning a + b*sqrt(D), components as fractions."""
    if "~" in s:
        a, b = s.split("~", 1)
        return QuadScalar(Fraction(a), Fraction(b), D)
    return QuadScalar(Fraction(s), 0, D)


def parse_vec(s: str) -> tuple[int, int]:
    parts = s.split(",")
    if len(parts) != 2:
        raise ConfigError(f"expected 'x,y' integer vector, got {s!r}")
    return (int(parts[0]), int(parts[1]))


def parse_hvec(s: str, D: int):
    parts = s.split(",")
    if len(parts) != 2:
        raise ConfigError(f"expected 'x,y' vector, got {s!r}")
    return (parse_scalar(parts[0], D), parse_scalar(parts[1], D))


def emit(obj: dict, pretty: bool, lines: Optional[list] = None) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")
    if pretty and lines:
        for ln in lines:
            sys.stderr.write(ln + "\n")


# -- subcommands -------------------------------------------------------------


def cmd_classify(cfg: SessionConfig, args) -> int:
    rep = classify(cfg.lattice, cfg.descriptor(args.descriptor), cfg.box_radius)
    out = rep.to_json()
    emit(out, args.pretty, [f"{args.descriptor}: {rep.type}"
                            + (f", boundary alpha {rep.alpha}" if rep.alpha else "")])
    return 0


def cmd_borel(cfg: SessionConfig, args) -> int:
    L = cfg.lattice
    gamma = parse_hvec(args.gamma, L.D)
    desc = borel_in(L, gamma)
    R = cfg.box_radius
    box = list(L.box(R))
    union_ok = all(member(L, desc, v) or member(L, desc, (-v[0], -v[1])) for v in box)
    inter = [v for v in box if member(L, desc, v) and member(L, desc, (-v[0], -v[1]))]
    inter_ok = inter == [(0, 0)]
    out = {
        "descriptor": desc.to_json(),
        "alpha": list(desc.boundary_alpha(L)) if desc.boundary_alpha(L) else None,
        "boxRadius": R,
        "unionCoversBox": union_ok,
        "intersectionIsZero": inter_ok,
    }
    ok = union_ok and inter_ok
    emit(out, args.pretty, [f"Borel axioms in box R={R}: {'ok' if ok else 'FAILED'}"])
    return 0 if ok else 1


def cmd_saturate(cfg: SessionConfig, args) -> int:
    L = cfg.lattice
    gamma = parse_hvec(args.gamma, L.D)
    alpha = parse_vec(args.alpha)
    beta, beta_p = saturate_witnesses(L, gamma, alpha)
    from .lattice import PLUS, inner, side

    checks = {
        "betaPositiveSide": side(L, gamma, beta) == PLUS,
        "betaPrimePositiveSide": side(L, gamma, beta_p) == PLUS,
        "betaDet": alpha[0] * beta[1] - alpha[1] * beta[0] == 1,
        "betaPrimeDet": alpha[0] * beta_p[1] - alpha[1] * beta_p[0] == -1,
    }
    ok = all(checks.values())
    out = {"beta": list(beta), "betaPrime": list(beta_p), "checks": checks}
    emit(out, args.pretty,
         [f"witnesses beta={beta}, beta'={beta_p}: {'ok' if ok else 'FAILED'}"])
    return 0 if ok else 1


def _character_target(cfg: SessionConfig, args):
    L = cfg.lattice
    name = args.target
    if name in cfg.descriptors:
        P = cfg.descriptors[name]
        if args.t is not None or args.i is not None:
            mods = irreducibles(L, P, {"ts": [Fraction(args.t or "0")]})
            i = int(args.i or 0)
            for m in mods:
                if m.i == i:
                    return m
            raise ConfigError(f"no module with coset index {i}")
        return Selector(kind="V_P", L=L, P=P)
    alpha = parse_vec(args.alpha) if args.alpha else None
    if name in ("VL", "V_L"):
        return Selector(kind="V_L", L=L)
    if name in ("VH", "V_H"):
        if alpha is None:
            alpha = _default_alpha(cfg)
        return Selector(kind="V_H", L=L, alpha=alpha)
    if name == "M1":
        return Selector(kind="M1", L=L)
    raise ConfigError(f"unknown character target {name!r}")


def _default_alpha(cfg: SessionConfig):
    for desc in cfg.descriptors.values():
        a = desc.boundary_alpha(cfg.lattice)
        if a is not None:
            return a
    raise ConfigError("no descriptor provides a boundary line; pass --alpha")


def cmd_character(cfg: SessionConfig, args) -> int:
    q = character(_character_target(cfg, args), Fraction(args.cap))
    out = {"target": args.target, "cap": args.cap, "series": q.to_json()}
    emit(out, args.pretty,
         ["  ".join(f"q^{t['exp']}:{t['dim']}" for t in q.to_json()) or "(empty)"])
    return 0


def cmd_verify_iso(cfg: SessionConfig, args) -> int:
    L = cfg.lattice
    alpha = parse_vec(args.alpha) if args.alpha else _default_alpha(cfg)
    hom = check_phi_hom(L, alpha, int(args.cap), cfg.ctx())
    chars = check_tensor_character(L, alpha, Fraction(args.char_cap))
    ok = not hom["failures"] and hom["omega_ok"] and hom["dims_ok"] and chars["equal"]
    out = {"hom": {k: hom[k] for k in ("check", "instances", "failures",
                                       "omega_ok", "dims_ok")},
           "characters": chars}
    emit(out, args.pretty,
         [f"mode instances: {hom['instances']}, failures: {len(hom['failures'])}",
          f"omega image: {'ok' if hom['omega_ok'] else 'FAILED'}",
          f"character identity to cap {args.char_cap}: "
          f"{'ok' if chars['equal'] else 'FAILED'}"])
    return 0 if ok else 1


def cmd_verify_ideal(cfg: SessionConfig, args) -> int:
    rep = check_ideal(cfg.lattice, cfg.descriptor(args.descriptor), cfg.ctx(),
                      sample_degree=int(args.sample_degree))
    ok = not rep["failures"]
    emit(rep, args.pretty,
         [f"ideal stability: {rep['instances']} instances, "
          f"{len(rep['failures'])} failures"])
    return 0 if ok else 1


def cmd_verify_commutators(cfg: SessionConfig, args) -> int:
    L = cfg.lattice
    sp = FockSpace.full_lattice(L)
    rng = random.Random(cfg.seed)
    pool = [w for d in range(3) for w in enumerate_basis(L, FULL_L, d)
            if L.norm(w.label) <= 2]
    failures = []
    for k in range(int(args.samples)):
        a, b, v = (FockState.of(rng.choice(pool)) for _ in range(3))
        m, n = rng.randint(-2, 2), rng.randint(-2, 2)
        r = check_commutator(sp, a, b, m, n, v, cfg.ctx())
        if not r.is_zero():
            failures.append({"sample": k, "m": m, "n": n})
    out = {"check": "commutator", "samples": int(args.samples),
           "failures": failures}
    emit(out, args.pretty,
         [f"commutator residuals: {args.samples} samples, "
          f"{len(failures)} failures"])
    return 0 if not failures else 1


def cmd_zhu_nil(cfg: SessionConfig, args) -> int:
    cert = nilpotency_certificate(cfg.lattice, cfg.descriptor(args.descriptor),
                                  parse_vec(args.beta), cfg.ctx())
    emit(cert, args.pretty,
         [f"beta={tuple(cert['beta'])}, N={cert['N']}, "
          f"steps={len(cert['steps'])}: {'ok' if cert['ok'] else 'FAILED'}"])
    return 0 if cert["ok"] else 1


def cmd_fusion(cfg: SessionConfig, args) -> int:
    L = cfg.lattice
    P = cfg.descriptor(args.descriptor)
    rep = classify(L, P)
    if rep.type == "TYPE_I":
        lams = [tuple(int(x) for x in s.split(",")) for s in (args.lams or "0,0").split(";")]
        mods = irreducibles(L, P, {"lams": lams})
    else:
        ts = [Fraction(t) for t in (args.ts or "0").split(",")]
        mods = irreducibles(L, P, {"ts": ts})
    table = []
    for m1 in mods:
        for m2 in mods:
            for m3 in mods:
                if fusion(m1, m2, m3) == 1:
                    table.append([m1.to_json(), m2.to_json(), m3.to_json()])
    out = {"modules": [m.to_json() for m in mods], "nonzeroTriples": table}
    emit(out, args.pretty,
         [f"{len(mods)} modules, {len(table)} nonzero fusion triples"])
    return 0


def cmd_c1(cfg: SessionConfig, args) -> int:
    rep = c1_decide(cfg.lattice, cfg.descriptor(args.descriptor),
                    box_radius=cfg.box_radius + 4)
    out = rep.to_json()
    emit(out, args.pretty, [f"verdict: {rep.verdict}"])
    return 0


def cmd_c1_dims(cfg: SessionConfig, args) -> int:
    L = cfg.lattice
    cap = int(args.cap)
    ctx = TruncationCtx(max(cap, cfg.max_degree))
    if args.target in ("VH", "V_H"):
        alpha = parse_vec(args.alpha) if args.alpha else _default_alpha(cfg)
        dims = c1_quotient_dims(L, "V_H", cap, ctx, alpha=alpha)
    else:
        dims = c1_quotient_dims(L, "V_P", cap, ctx,
                                P=cfg.descriptor(args.target))
    out = {"target": args.target, "cap": cap, "dims": dims}
    emit(out, args.pretty, ["dims per degree: " + " ".join(map(str, dims))])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="paravoa",
        description="Exact computations for parabolic-type subalgebras of "
                    "rank-two lattice vertex operator algebras.",
    )
    p.add_argument("--config", required=True,
                   help="config file path or bundled name (a2, diag22)")
    p.add_argument("--pretty", action="store_true",
                   help="print a human-readable summary to stderr")
    # accepted both before and after the subcommand
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=(
        lambda **kw: argparse.ArgumentParser(parents=[shared], **kw)))

    s = sub.add_parser("classify", help="classify a submonoid descriptor")
    s.add_argument("descriptor")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("borel", help="Borel-type submonoid for a direction")
    s.add_argument("gamma", help="'x,y'; components 'a' or 'a~b' = a+b*sqrt(D)")
    s.set_defaults(fn=cmd_borel)

    s = sub.add_parser("saturate", help="saturation witness pair")
    s.add_argument("gamma")
    s.add_argument("alpha", help="'x,y' primitive lattice vector")
    s.set_defaults(fn=cmd_saturate)

    s = sub.add_parser("character", help="graded-dimension series")
    s.add_argument("target", help="descriptor name, VL, VH, or M1")
    s.add_argument("--cap", default="6")
    s.add_argument("--alpha")
    s.add_argument("--t", help="module parameter t (with a descriptor target)")
    s.add_argument("--i", help="module coset index")
    s.set_defaults(fn=cmd_character)

    s = sub.add_parser("verify-iso", help="tensor-factorization checks")
    s.add_argument("--alpha")
    s.add_argument("--cap", default="2")
    s.add_argument("--char-cap", default="12")
    s.set_defaults(fn=cmd_verify_iso)

    s = sub.add_parser("verify-ideal", help="ideal stability spot checks")
    s.add_argument("descriptor")
    s.add_argument("--sample-degree", default="2")
    s.set_defaults(fn=cmd_verify_ideal)

    s = sub.add_parser("verify-commutators", help="seeded commutator residuals")
    s.add_argument("--samples", default="20")
    s.set_defaults(fn=cmd_verify_commutators)

    s = sub.add_parser("zhu-nil", help="nilpotency certificate")
    s.add_argument("descriptor")
    s.add_argument("beta", help="'x,y' lattice vector")
    s.set_defaults(fn=cmd_zhu_nil)

    s = sub.add_parser("fusion", help="fusion table over a module sample")
    s.add_argument("descriptor")
    s.add_argument("--ts", help="comma-separated t values (type II)")
    s.add_argument("--lams", help="semicolon-separated 'x,y' (type I)")
    s.set_defaults(fn=cmd_fusion)

    s = sub.add_parser("c1", help="C1-cofiniteness decision")
    s.add_argument("descriptor")
    s.set_defaults(fn=cmd_c1)

    s = sub.add_parser("c1-dims", help="quotient dimensions per degree")
    s.add_argument("target", help="VH or a descriptor name")
    s.add_argument("--cap", default="4")
    s.add_argument("--alpha")
    s.set_defaults(fn=cmd_c1_dims)

    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already; normalize --help to 0
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        return args.fn(cfg, args)
    except (ConfigError, PreconditionViolated, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
