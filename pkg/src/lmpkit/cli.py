"""Command-line driver: ``lmpkit <group> <command> ...``.

Exit codes: 0 when the command ran and the checked property holds, 2 when
it ran and the property fails (the witness is printed), 1 when it
could not run (bad arguments or unreadable input).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import io
from .bisim import (check_state_bisimulation, event_bisimilarity, largest_state_bisimulation,
                    semipullback_obstruction)
from .certificate import DEFAULT_SAMPLES, load_certificate, prove_not_state_bisimilar, verify_certificate
from .errors import InvalidKernelError, LmpError, NoGapError
from .gallery import (GalleryConfig, build_full_pair_sum, build_full_s3, build_s3, build_s3_minus,
                      build_sum_example, build_T, build_unclosable_cospan, build_Tprime)
from .intervals import format_fraction, to_fraction
from .lmp import check_zigzag, validate_lmp
from .logic import eval_formula, logical_equivalence, parse_formula, stabilization_depth
from .measure import lower_extension, upper_extension

SEED_ENV = "LMPKIT_SEED"
OK, PROPERTY_FAILED, ERROR = 0, 2, 1


class _Out:
    """Collects a text report and a JSON report; prints one of them."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict = {}

    def say(self, line: str) -> None:
        self.lines.append(line)

    def emit(self) -> None:
        if self.as_json:
            sys.stdout.write(io.dumps(self.data))
        else:
            for line in self.lines:
                print(line)


def _profile_arg(text: str) -> tuple[Fraction, Fraction]:
    try:
        inner, outer = (to_fraction(x.strip()) for x in text.split(","))
    except (ValueError, TypeError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected 'inner,outer' rationals, got {text!r}") from None
    return inner, outer


def _config(args) -> GalleryConfig:
    inner, outer = args.profile
    return GalleryConfig(args.n, inner, outer, preset=args.preset)


def _seed_default() -> int:
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


def _write_dot(path: str | None, rel) -> None:
    if path:
        Path(path).write_text(rel.to_dot(), encoding="utf-8")


def _classes_text(rel) -> list[str]:
    return ["{" + ", ".join(sorted(c)) + "}" for c in rel.classes]


# -- commands ---------------------------------------------------------------

_BUILDERS = {
    "s3": lambda cfg: build_s3(cfg),
    "s3-minus-s": lambda cfg: build_s3_minus(cfg, "s"),
    "s3-minus-t": lambda cfg: build_s3_minus(cfg, "t"),
    "T": build_T,
    "Tprime": build_Tprime,
    "sum": lambda cfg: build_sum_example(cfg)[0],
}


def cmd_gallery_build(args, out: _Out) -> int:
    cfg = _config(args)
    manifest = {"builder": args.structure, "config": cfg.to_json()}
    if args.structure == "cospan":
        cs = build_unclosable_cospan(cfg, swap=args.swap)
        data = {"left": io.lmp_to_json(cs.left), "right": io.lmp_to_json(cs.right),
                "target": io.lmp_to_json(cs.target), "left_map": dict(cs.left_map),
                "right_map": dict(cs.right_map)}
        manifest["swap"] = args.swap
    elif args.structure in ("full-s3", "full-pair-sum"):
        build = build_full_s3 if args.structure == "full-s3" else build_full_pair_sum
        data = build(cfg).to_json()
    else:
        data = io.lmp_to_json(_BUILDERS[args.structure](cfg))
    data["manifest"] = manifest
    if args.out:
        io.write_json(args.out, data)
        out.say(f"wrote {args.structure} to {args.out}")
    else:
        out.say(io.dumps(data).rstrip())
    out.data = data
    return OK


def cmd_lmp_validate(args, out: _Out) -> int:
    m = io.lmp_from_json(io.read_json(args.model))
    try:
        rep = validate_lmp(m, strict_probability=args.strict)
    except InvalidKernelError as exc:
        out.say(f"invalid kernel: {exc}")
        out.data = {"ok": False, "error": str(exc)}
        return PROPERTY_FAILED
    out.say(f"valid LMP: {rep.regions} regions, labels {list(rep.labels)}")
    for label, vals in rep.achieved.items():
        out.say(f"  achieved values for {label}: {', '.join(map(format_fraction, vals))}")
    out.data = {"ok": True, "regions": rep.regions, "labels": list(rep.labels),
                "achieved": {k: [format_fraction(v) for v in vs] for k, vs in rep.achieved.items()}}
    return OK


def cmd_logic_eval(args, out: _Out) -> int:
    m = io.lmp_from_json(io.read_json(args.model))
    f = parse_formula(args.formula)
    sat = sorted(eval_formula(f, m))
    out.say(", ".join(sat) if sat else "(none)")
    out.data = sat
    return OK


def cmd_logic_equiv(args, out: _Out) -> int:
    m = io.lmp_from_json(io.read_json(args.model))
    rel = logical_equivalence(m, args.depth)
    depth = stabilization_depth(m) if args.depth is None else args.depth
    out.say(f"logical equivalence at depth {depth}:")
    out.lines += ["  " + c for c in _classes_text(rel)]
    out.data = {"depth": depth, "classes": rel.to_json()}
    _write_dot(args.dot, rel)
    return OK


def _relation_report(name: str, rel, args, out: _Out) -> int:
    _write_dot(args.dot, rel)
    out.data = {"classes": rel.to_json()}
    if args.pair:
        a, b = args.pair
        same = rel.related(a, b)
        out.say(f"{name}: {'yes' if same else 'no'}")
        out.data["pair"] = [a, b]
        out.data["related"] = same
        return OK if same else PROPERTY_FAILED
    out.say(f"{name} classes:")
    out.lines += ["  " + c for c in _classes_text(rel)]
    return OK


def cmd_bisim_event(args, out: _Out) -> int:
    m = io.lmp_from_json(io.read_json(args.model))
    return _relation_report("event-bisimilar", event_bisimilarity(m), args, out)


def cmd_bisim_state(args, out: _Out) -> int:
    m = io.lmp_from_json(io.read_json(args.model))
    return _relation_report("state-bisimilar", largest_state_bisimulation(m), args, out)


def cmd_bisim_check(args, out: _Out) -> int:
    m = io.lmp_from_json(io.read_json(args.model))
    rel = io.relation_from_json(io.read_json(args.relation), m.regions)
    rep = check_state_bisimulation(m, rel)
    if rep.ok:
        out.say("state bisimulation: pass")
        out.data = {"ok": True}
        return OK
    s, t, a, q, vs, vt = rep.witness
    out.say(f"state bisimulation: fail; tau_{a}({s}, Q) = {vs} but tau_{a}({t}, Q) = {vt} "
            f"for Q = {{{', '.join(sorted(q))}}}")
    out.data = {"ok": False, "witness": {"s": s, "t": t, "label": a, "event": sorted(q),
                                         "values": [format_fraction(vs), format_fraction(vt)]}}
    return PROPERTY_FAILED


def cmd_bisim_refute(args, out: _Out) -> int:
    cfg = _config(args)
    model = build_full_pair_sum(cfg) if args.pair_sum else build_full_s3(cfg)
    s, t = args.pair or (("1.s", "2.t") if args.pair_sum else ("s", "t"))
    try:
        cert = prove_not_state_bisimilar(model, s, t, samples=args.samples, seed=args.seed)
    except NoGapError as exc:
        out.say(f"no refutation: {exc}")
        out.data = {"ok": False, "error": str(exc)}
        return PROPERTY_FAILED
    text = cert.dumps()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        out.say(f"certificate for {s} vs {t} written to {args.out}")
    else:
        out.say(text.rstrip())
    out.data = cert.to_json()
    return OK


def cmd_bisim_verify(args, out: _Out) -> int:
    cert = load_certificate(Path(args.certificate).read_text(encoding="utf-8"))
    seed = args.seed
    if seed is None:
        seed = _seed_default() if SEED_ENV in os.environ else cert.seed
    rep = verify_certificate(cert, samples=args.samples, seed=seed)
    out.data = {"ok": rep.ok, "failed_step": rep.failed_step, "reason": rep.reason,
                "obligations": rep.obligations}
    if rep.ok:
        out.say(f"certificate: pass ({rep.obligations} obligations checked)")
        return OK
    out.say(f"certificate: fail at step {rep.failed_step}: {rep.reason}")
    return PROPERTY_FAILED


def cmd_zigzag_check(args, out: _Out) -> int:
    src = io.lmp_from_json(io.read_json(args.source))
    dst = io.lmp_from_json(io.read_json(args.target))
    f = io.read_json(args.map)
    rep = check_zigzag(f, src, dst)
    out.data = {"ok": rep.ok, "reason": rep.reason,
                "witness": None if rep.witness is None else
                [str(x) if not isinstance(x, Fraction) else format_fraction(x) for x in rep.witness]}
    if rep.ok:
        out.say("zig-zag: pass")
        return OK
    out.say(f"zig-zag: fail ({rep.reason}) {rep.witness or ''}".rstrip())
    return PROPERTY_FAILED


def cmd_semipullback_demo(args, out: _Out) -> int:
    cs = build_unclosable_cospan(_config(args), swap=args.swap)
    left_ok = check_zigzag(cs.left_map, cs.left, cs.target).ok
    right_ok = check_zigzag(cs.right_map, cs.right, cs.target).ok
    out.say(f"legs are zig-zags: {left_ok and right_ok}")
    obs = semipullback_obstruction(cs)
    if obs is None:
        out.say("no obstruction: both sources weigh V equally")
        out.data = {"obstruction": None}
        return PROPERTY_FAILED
    out.say(f"obstruction at region {obs.region}: m0(V)={format_fraction(obs.left_value)}, "
            f"m1(V)={format_fraction(obs.right_value)}")
    out.say(f"  {obs.explanation}")
    out.data = {"obstruction": {"region": obs.region, "label": obs.label, "event": sorted(obs.event),
                                "left": format_fraction(obs.left_value),
                                "right": format_fraction(obs.right_value),
                                "explanation": obs.explanation}}
    return OK


def cmd_measure_extend(args, out: _Out) -> int:
    space = io.space_from_json(io.read_json(args.space))
    mu, profile = io.measure_from_json(io.read_json(args.measure), space)
    lower, upper = lower_extension(mu, profile), upper_extension(mu, profile)
    v = space.abstract_event(True)
    out.data = {"lower": lower.to_json(), "upper": upper.to_json(),
                "V": {"lower": format_fraction(lower(v)), "upper": format_fraction(upper(v))}}
    out.say(f"lower extension: {lower.to_json()}")
    out.say(f"upper extension: {upper.to_json()}")
    out.say(f"mass of V: lower {format_fraction(lower(v))}, upper {format_fraction(upper(v))}")
    return OK


# -- parser -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="print a JSON report")


def _gallery_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=2, help="number of interval generators")
    p.add_argument("--profile", type=_profile_arg, default=(Fraction(0), Fraction(1)),
                   help="inner,outer mass of V (default 0,1)")
    p.add_argument("--preset", choices=("enumeration", "dyadic"), default="enumeration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmpkit", description="Exact symbolic checks for labelled Markov processes.",
        epilog="exit codes: 0 property holds, 2 property fails, 1 error")
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name, fn, help_text):
        p = group.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(fn=fn)
        return p

    g = groups.add_parser("gallery").add_subparsers(dest="command", required=True)
    p = command(g, "build", cmd_gallery_build, "build a gallery structure as JSON")
    p.add_argument("structure", choices=sorted(_BUILDERS) + ["cospan", "full-s3", "full-pair-sum"])
    _gallery_flags(p)
    p.add_argument("--swap", action="store_true", help="exchange the cospan sources")
    p.add_argument("--out")

    g = groups.add_parser("lmp").add_subparsers(dest="command", required=True)
    p = command(g, "validate", cmd_lmp_validate, "check kernels are sub-probability measures")
    p.add_argument("model")
    p.add_argument("--strict", action="store_true", help="require total mass exactly 1")

    g = groups.add_parser("logic").add_subparsers(dest="command", required=True)
    p = command(g, "eval", cmd_logic_eval, "regions satisfying a formula")
    p.add_argument("model")
    p.add_argument("formula")
    p = command(g, "equiv", cmd_logic_equiv, "logical equivalence classes")
    p.add_argument("model")
    p.add_argument("--depth", type=int)
    p.add_argument("--dot")

    g = groups.add_parser("bisim").add_subparsers(dest="command", required=True)
    for name, fn, text in (("event", cmd_bisim_event, "event bisimilarity"),
                           ("state", cmd_bisim_state, "largest state bisimulation")):
        p = command(g, name, fn, text)
        p.add_argument("model")
        p.add_argument("--pair", nargs=2, metavar=("S", "T"))
        p.add_argument("--dot")
    p = command(g, "check", cmd_bisim_check, "check a relation is a state bisimulation")
    p.add_argument("model")
    p.add_argument("--relation", required=True, help="JSON classes or {\"pairs\": [...]}")
    p = command(g, "refute", cmd_bisim_refute, "certificate that two states are not bisimilar")
    p.add_argument("--full-s3", action="store_true", help="use the full three-state model (default)")
    p.add_argument("--pair-sum", action="store_true", help="use the full two-copy sum instead")
    p.add_argument("--pair", nargs=2, metavar=("S", "T"),
                   help="states to separate (default s t, or 1.s 2.t with --pair-sum)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=_seed_default())
    p.add_argument("--out")
    _gallery_flags(p)
    p = command(g, "verify-cert", cmd_bisim_verify, "replay a certificate")
    p.add_argument("certificate")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=None)

    g = groups.add_parser("zigzag").add_subparsers(dest="command", required=True)
    p = command(g, "check", cmd_zigzag_check, "check a region map is a zig-zag")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("map")

    g = groups.add_parser("semipullback").add_subparsers(dest="command", required=True)
    p = command(g, "demo", cmd_semipullback_demo, "obstruction for the identity-carried cospan")
    _gallery_flags(p)
    p.add_argument("--swap", action="store_true")

    g = groups.add_parser("measure").add_subparsers(dest="command", required=True)
    p = command(g, "extend", cmd_measure_extend, "lower and upper extension of a measure")
    p.add_argument("space")
    p.add_argument("measure")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else ERROR
    out = _Out(args.json)
    try:
        code = args.fn(args, out)
    except (LmpError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    out.emit()
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
