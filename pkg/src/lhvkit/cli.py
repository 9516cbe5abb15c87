"""Command-line front end.

Exit codes: 0 success / feasible / valid, 1 negative finding (invalid,
infeasible, signalling, violated), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import lhv, polytope, quantum
from .scenario import (CONVENTION, DEFAULT_TOL, Behavior, Scenario, StructureError,
                       no_signalling_check, validate_behavior)

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2
DEMOS = ("chsh-classical", "chsh-quantum", "ghz", "sbound", "pr-box", "fine-roundtrip")
S_GRID = tuple(round(0.05 * k, 2) for k in range(10))


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
                         ) from exc


def _quantum_preset(spec: dict) -> Behavior:
    name = spec.get("state")
    if name == "singlet":
        state, default = quantum.singlet_state(), quantum.CHSH_OPTIMAL_ANGLES
    elif isinstance(name, str) and name.startswith("ghz") and name[3:].isdigit():
        n = int(name[3:])
        state = quantum.ghz_state(n)
        default = (((np.pi / 2, 0.0), (np.pi / 2, np.pi / 2)),) * n
    else:
        raise InputError(f"unknown quantum state preset {name!r}")
    ma = quantum.MeasurementAssignment.qubits(spec.get("angles", default))
    return quantum.behavior_from_quantum(state, ma)


def behavior_from_obj(obj) -> Behavior:
    """Build a behavior from any of the accepted JSON documents."""
    if not isinstance(obj, dict):
        raise InputError("top-level JSON value must be an object")
    try:
        if "probabilities" in obj:
            return Behavior.from_json(obj)
        if "joint" in obj:
            return lhv.behavior_from_joint(lhv.JointDistribution.from_json(obj))
        if "components" in obj:
            return lhv.behavior_from_model(lhv.StochasticLocalModel.from_json(obj))
        if "quantum" in obj:
            return _quantum_preset(obj["quantum"])
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"malformed document: {exc!r}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError("expected one of the keys probabilities, joint, components, quantum")


def load_behavior(path: str) -> Behavior:
    return behavior_from_obj(_read_json(path))


def load_functional(arg: str) -> polytope.BellFunctional:
    presets = {"chsh": polytope.chsh_functional, "mermin": polytope.mermin_functional}
    if arg.lower() in presets:
        return presets[arg.lower()]()
    try:
        return polytope.BellFunctional.from_json(_read_json(arg))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed functional: {exc}") from exc


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    report = {"convention": CONVENTION, **report}
    if fmt == "json":
        out.write(json.dumps(report) + "\n")
        return
    for key, value in report.items():
        if isinstance(value, dict):
            out.write(f"{key}:\n")
            for k, v in value.items():
                out.write(f"  {k}: {_fmt(v)}\n")
        else:
            out.write(f"{key}: {_fmt(value)}\n")


def cmd_validate(args) -> tuple[int, dict]:
    rep = validate_behavior(load_behavior(args.path), args.tol)
    d = rep.to_json()
    d["offending_indices"] = [list(i) if isinstance(i, tuple) else i
                              for i in d["offending_indices"]]
    return (EXIT_OK if rep.is_valid else EXIT_NEGATIVE), d


def cmd_nosignalling(args) -> tuple[int, dict]:
    rep = no_signalling_check(load_behavior(args.path), args.tol)
    return (EXIT_OK if rep.passes else EXIT_NEGATIVE), rep.to_json()


def cmd_membership(args) -> tuple[int, dict]:
    b = load_behavior(args.path)
    if not validate_behavior(b, args.tol).is_valid:
        raise InputError("input is not a valid behavior; run validate for details")
    res = polytope.local_polytope_membership(b, args.tol)
    return (EXIT_OK if res.feasible else EXIT_NEGATIVE), res.to_json()


def cmd_maximize(args) -> tuple[int, dict]:
    f = load_functional(args.functional)
    best = polytope.maximize_functional_classical(f)
    report = {"functional": f.name or args.functional, "classical_max": best.value,
              "argmax": [list(p) for p in best.argmax.assignment]}
    code = EXIT_OK
    if args.behavior:
        value = polytope.evaluate_functional(f, load_behavior(args.behavior))
        report["value"] = value
        report["violated"] = value > best.value + args.tol
        code = EXIT_NEGATIVE if report["violated"] else EXIT_OK
    return code, report


def sbound_table(grid) -> tuple[bool, list]:
    rows, ok, prev = [], True, None
    for s in grid:
        corner = polytope.s_stochastic_max_chsh(s)
        closed = 2 * (1 - 2 * s) ** 2
        ok &= abs(corner - closed) <= 1e-12 and (prev is None or corner < prev)
        prev = corner
        rows.append({"s": s, "corner_max": corner, "closed_form": closed})
    return ok, rows


def cmd_sbound(args) -> tuple[int, dict]:
    grid = args.s if args.s else S_GRID
    for s in grid:
        if not 0 <= s < 0.5:
            raise InputError(f"s must lie in [0, 1/2), got {s}")
    ok, rows = sbound_table(grid)
    report = {f"s={r['s']:g}": {"corner_max": r["corner_max"], "closed_form": r["closed_form"]}
              for r in rows}
    report["matches_closed_form"] = ok
    return (EXIT_OK if ok else EXIT_NEGATIVE), report


def _ghz_report(tol) -> tuple[bool, dict]:
    rep = polytope.ghz_contradiction_check(tol)
    cert = rep.lp_status.certificate
    ok = (not rep.deterministic_consistent and rep.parity_products == {1}
          and rep.required_parity == -1 and not rep.lp_status.feasible
          and abs(rep.mermin_quantum - 4) <= 1e-9 and rep.mermin_classical == 2)
    d = rep.to_json()
    d.pop("lp")
    d["lp_status"] = rep.lp_status.status
    if cert is not None:
        d["certificate_value"] = cert.value
        d["certificate_classical_max"] = cert.classical_max
    return ok, d


def cmd_ghz(args) -> tuple[int, dict]:
    ok, d = _ghz_report(args.tol)
    return (EXIT_OK if ok else EXIT_NEGATIVE), d


def demo_chsh_classical(args):
    f = polytope.chsh_functional()
    best = polytope.maximize_functional_classical(f)
    n = sum(1 for _ in lhv.enumerate_deterministic(f.scenario))
    return best.value == 2 and n == 16, {"strategies": n, "classical_max": best.value}


def demo_chsh_quantum(args):
    b = quantum.chsh_singlet_behavior()
    value = polytope.evaluate_functional(polytope.chsh_functional(), b)
    res = polytope.local_polytope_membership(b, args.tol)
    ok = abs(abs(value) - 2 * np.sqrt(2)) <= 1e-9 and not res.feasible \
        and res.certificate.margin >= 0.8
    return ok, {"chsh_value": value, "abs_value": abs(value), "two_sqrt_two": 2 * np.sqrt(2),
                "lp_status": res.status, "certificate_value": res.certificate.value,
                "certificate_classical_max": res.certificate.classical_max,
                "margin": res.certificate.margin}


def demo_sbound(args):
    return sbound_table(S_GRID)[0], cmd_sbound(argparse.Namespace(s=None))[1]


def demo_pr_box(args):
    b = lhv.make_pr_box()
    ns = no_signalling_check(b, args.tol)
    value = polytope.evaluate_functional(polytope.chsh_functional(), b)
    res = polytope.local_polytope_membership(b, args.tol)
    ok = ns.passes and abs(value - 4) <= 1e-12 and not res.feasible
    return ok, {"no_signalling": ns.passes, "chsh_value": value, "lp_status": res.status,
                "certificate_value": res.certificate.value}


def demo_fine_roundtrip(args, trials: int = 100):
    rng = np.random.default_rng(args.seed)
    s = Scenario.chsh()
    worst_model = worst_joint = worst_lp = 0.0
    for _ in range(trials):
        m = lhv.random_model(s, rng)
        b = lhv.behavior_from_model(m)
        worst_model = max(worst_model, float(np.abs(
            lhv.behavior_from_joint(lhv.joint_from_model(m)).table - b.table).max()))
        res = polytope.local_polytope_membership(b, args.tol)
        if not res.feasible:
            worst_lp = np.inf
        else:
            worst_lp = max(worst_lp, float(np.abs(
                lhv.behavior_from_joint(res.joint).table - b.table).max()))
        j = lhv.random_joint(s, rng)
        worst_joint = max(worst_joint, float(np.abs(
            lhv.joint_from_model(lhv.model_from_joint(j)).table - j.table).max()))
    ok = worst_model <= 1e-12 and worst_joint <= 1e-12 and worst_lp <= 1e-8
    return ok, {"trials": trials, "seed": args.seed, "model_to_joint_to_behavior": worst_model,
                "joint_to_model_to_joint": worst_joint, "lp_reconstruction": worst_lp}


def cmd_demo(args) -> tuple[int, dict]:
    fn = {"chsh-classical": demo_chsh_classical, "chsh-quantum": demo_chsh_quantum,
          "ghz": lambda a: _ghz_report(a.tol), "sbound": demo_sbound,
          "pr-box": demo_pr_box, "fine-roundtrip": demo_fine_roundtrip}[args.name]
    ok, report = fn(args)
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"demo": args.name, **report, "passed": ok}


def build_parser() -> argparse.ArgumentParser:
    def global_flags(p, defaults):
        kw = (lambda v: {"default": v}) if defaults else (lambda v: {"default": argparse.SUPPRESS})
        p.add_argument("--tol", type=float, help=f"tolerance (default {DEFAULT_TOL:g})",
                       **kw(DEFAULT_TOL))
        p.add_argument("--format", choices=("text", "json"), **kw("text"))
        p.add_argument("--seed", type=int, help="seed for sampled demos (default 0)", **kw(0))

    # flags are accepted before or after the subcommand; the subcommand copies
    # must not carry defaults or they would overwrite the global values
    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, defaults=False)
    parser = argparse.ArgumentParser(
        prog="lhvkit", description="Bell scenarios, local models and polytope membership.")
    global_flags(parser, defaults=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "check nonnegativity and normalization").add_argument("path")
    add("nosignalling", cmd_nosignalling, "check marginal independence").add_argument("path")
    add("membership", cmd_membership, "local-polytope membership by LP").add_argument("path")
    p = add("maximize", cmd_maximize, "classical maximum of a Bell functional")
    p.add_argument("functional", help="'chsh', 'mermin' or a functional JSON file")
    p.add_argument("--behavior", default=None, help="also evaluate on this behavior")
    add("sbound", cmd_sbound, "CHSH bound for s-stochastic local models").add_argument(
        "--s", type=float, nargs="+", default=None)
    add("ghz", cmd_ghz, "GHZ contradiction check")
    add("demo", cmd_demo, "run a canned end-to-end demonstration").add_argument(
        "name", choices=DEMOS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    if args.tol <= 0:
        sys.stderr.write("error: --tol must be positive\n")
        return EXIT_ERROR
    try:
        code, report = args.func(args)
    except (InputError, StructureError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
