"""Command-line front end.

Every subcommand reads and writes the JSON formats of ``fileio``. With
``--json`` the command emits exactly one top-level JSON object (sorted
keys, so identical inputs and seeds give byte-identical output); the
human format rounds to six significant digits. Exit codes: 0 success,
2 a validation or verification failure (including malformed input
files), 1 usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import agent as agentmod
from . import dilate, fileio, order, sicrep
from .errors import SchemaError
from .measure import (
    OutcomeDistribution,
    StochasticMatrix,
    basis_state,
    born_probabilities,
    computational_povm,
    post_process,
    trivial_povm,
    validate_povm,
    xbasis_povm,
)

GENERAL_TOL = 1e-8
CHECK_TOL = 1e-9


@dataclass(frozen=True)
class CliConfig:
    tol: float = GENERAL_TOL
    seed: int = 0
    output: str = "human"

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage problems; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.6g}{z.imag:+.6g}j"


def _matrix_lines(m, indent: str = "  ") -> list[str]:
    m = np.asarray(m)
    out = []
    for row in m:
        if np.iscomplexobj(m):
            cells = ", ".join(_fmt_complex(v) for v in row)
        else:
            cells = ", ".join(_fmt(v) for v in row)
        out.append(f"{indent}[{cells}]")
    return out


def _emit(args, obj: dict, lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(fileio.dump_json(obj))
    else:
        for line in lines:
            print(line)


def _distribution_output(args, q: OutcomeDistribution) -> None:
    lines = [f"  {label}: {_fmt(p)}" for label, p in zip(q.labels, q.probs)]
    _emit(args, fileio.distribution_to_obj(q), lines)


def _load_sic(args) -> sicrep.SicPovm:
    if getattr(args, "sic", None):
        return fileio.sic_from_obj(fileio.load_json(args.sic))
    if getattr(args, "dim", None):
        return sicrep.build_sic(args.dim)
    raise SchemaError("arguments", "need --sic FILE or --dim D to fix the reference measurement")


# ------------------------------------------------------------- subcommands

def _cmd_validate(args, config) -> int:
    obj = fileio.load_json(args.file)
    if args.kind == "povm":
        p = fileio.povm_from_obj(obj)
        report = validate_povm(p, atol=args.tol if args.tol is not None else CHECK_TOL)
        payload = {"kind": "povm", "valid": report.ok, "violations": report.lines() if not report.ok else []}
        _emit(args, payload, report.lines())
        return 0 if report.ok else 2
    loaders = {
        "state": fileio.state_from_obj,
        "channel": fileio.channel_from_obj,
        "dilation": fileio.dilation_from_obj,
        "sic": fileio.sic_from_obj,
        "table": lambda o: fileio.table_from_obj(o)[0],
        "agent": fileio.agent_from_obj,
    }
    loaders[args.kind](obj)  # raises SchemaError when invalid
    _emit(args, {"kind": args.kind, "valid": True, "violations": []}, ["valid"])
    return 0


def _cmd_born(args, config) -> int:
    rho = fileio.state_from_obj(fileio.load_json(args.state))
    p = fileio.povm_from_obj(fileio.load_json(args.povm))
    _distribution_output(args, born_probabilities(rho, p))
    return 0


def _cmd_sic_build(args, config) -> int:
    sic = sicrep.build_sic(args.dim)
    obj = fileio.sic_to_obj(sic)
    if args.out:
        fileio.save_json(args.out, obj)
    _emit(args, obj, [
        f"reference measurement, dim {sic.dim}: {sic.povm.n_outcomes} effects",
        f"pairwise overlap 1/(d+1) = {_fmt(1.0 / (sic.dim + 1))}",
    ] + ([f"written to {args.out}"] if args.out else []))
    return 0


def _cmd_sic_probs(args, config) -> int:
    sic = _load_sic(args)
    rho = fileio.state_from_obj(fileio.load_json(args.state))
    p = sicrep.state_to_sic_probs(rho, sic)
    obj = {"dim": p.dim, "probs": [float(v) for v in p.probs]}
    _emit(args, obj, [f"  p({i}) = {_fmt(v)}" for i, v in enumerate(p.probs)])
    return 0


def _parse_probs(args) -> list[float]:
    if args.probs is not None:
        try:
            return [float(tok) for tok in args.probs.split(",")]
        except ValueError:
            raise SchemaError("--probs", "expected comma-separated numbers")
    obj = fileio.load_json(args.probs_file)
    if isinstance(obj, dict):
        obj = obj.get("probs", obj)
    if not isinstance(obj, list):
        raise SchemaError("probs", 'expected an array or an object with a "probs" field')
    return [float(v) for v in obj]


def _cmd_sic_state(args, config) -> int:
    sic = _load_sic(args)
    values = _parse_probs(args)
    p = sicrep.SicProbVector(dim=sic.dim, probs=np.array(values))
    rho = sicrep.sic_probs_to_state(p, sic)
    obj = fileio.state_to_obj(rho)
    if args.out:
        fileio.save_json(args.out, obj)
    _emit(args, obj, ["reconstructed state:"] + _matrix_lines(rho.matrix))
    return 0


def _conditional_inputs(args):
    """(p, r, labels) from either raw files or a (state, povm) pair."""
    raw = args.p_file is not None or args.r_file is not None
    converted = args.state is not None or args.povm is not None
    if raw == converted:
        raise SchemaError(
            "arguments", "give either --p-file and --r-file, or --state and --povm"
        )
    if raw:
        if args.p_file is None or args.r_file is None:
            raise SchemaError("arguments", "--p-file and --r-file go together")
        p_obj = fileio.load_json(args.p_file)
        dim = p_obj.get("dim") if isinstance(p_obj, dict) else None
        if not isinstance(dim, int):
            raise SchemaError("p.dim", "probability file needs an integer dim")
        probs = p_obj.get("probs")
        if not isinstance(probs, list):
            raise SchemaError("p.probs", "probability file needs a probs array")
        p = sicrep.SicProbVector(dim=dim, probs=np.array([float(v) for v in probs]))
        r = fileio.stochastic_from_obj(fileio.load_json(args.r_file))
        return p, r, None
    if args.state is None or args.povm is None:
        raise SchemaError("arguments", "--state and --povm go together")
    sic = _load_sic(args)
    rho = fileio.state_from_obj(fileio.load_json(args.state))
    target = fileio.povm_from_obj(fileio.load_json(args.povm))
    p = sicrep.state_to_sic_probs(rho, sic)
    r = sicrep.povm_to_conditional(sic, target)
    return p, r, target.labels


def _cmd_urgleichung(args, config) -> int:
    p, r, labels = _conditional_inputs(args)
    _distribution_output(args, sicrep.urgleichung(p, r, labels=labels))
    return 0


def _cmd_classical(args, config) -> int:
    p, r, labels = _conditional_inputs(args)
    _distribution_output(args, sicrep.classical_rule(p, r, labels=labels))
    return 0


def _cmd_compare(args, config) -> int:
    left = fileio.povm_from_obj(fileio.load_json(args.left))
    right = fileio.povm_from_obj(fileio.load_json(args.right))
    verdict = order.compare(left, right, tol=config.tol)
    obj = {
        "relation": verdict.relation,
        "residual_forward": float(verdict.residual_forward),
        "residual_backward": float(verdict.residual_backward),
        "witness_forward": (
            fileio.stochastic_to_obj(verdict.witness_forward)
            if verdict.witness_forward is not None else None
        ),
        "witness_backward": (
            fileio.stochastic_to_obj(verdict.witness_backward)
            if verdict.witness_backward is not None else None
        ),
    }
    lines = [f"relation: {verdict.relation}"]
    if verdict.witness_forward is not None:
        lines.append(f"forward witness residual {_fmt(verdict.residual_forward)}")
    if verdict.witness_backward is not None:
        lines.append(f"backward witness residual {_fmt(verdict.residual_backward)}")
    _emit(args, obj, lines)
    return 0


def _cmd_umax(args, config) -> int:
    prior, utility, channels = fileio.decision_from_obj(fileio.load_json(args.model))
    if args.channel not in channels:
        raise SchemaError(
            f"decision.channels.{args.channel}",
            f"no such channel; available: {', '.join(sorted(channels))}",
        )
    model = order.DecisionModel(prior=prior, channel=channels[args.channel], utility=utility)
    result = order.u_max(model)
    obj = {"value": result.value, "strategy": fileio.stochastic_to_obj(result.strategy)}
    picks = np.argmax(result.strategy.entries, axis=0)
    lines = [f"u_max = {_fmt(result.value)}",
             "strategy: " + ", ".join(f"x{ix}->w{w}" for ix, w in enumerate(picks))]
    _emit(args, obj, lines)
    return 0


def _cmd_dilate_naimark(args, config) -> int:
    z = fileio.povm_from_obj(fileio.load_json(args.povm))
    spec = dilate.naimark_construct(z)
    check = dilate.is_generalized_dilation(spec.y, z, spec)
    obj = fileio.dilation_to_obj(spec)
    if args.out:
        fileio.save_json(args.out, obj)
    _emit(args, obj, [
        f"probe dim {spec.dim_s}, target dim {spec.dim_t}",
        f"self-check residual {_fmt(check.residual)}",
    ] + ([f"written to {args.out}"] if args.out else []))
    return 0


def _cmd_dilate_verify(args, config) -> int:
    spec = fileio.dilation_from_obj(fileio.load_json(args.spec))
    z = fileio.povm_from_obj(fileio.load_json(args.target))
    y = spec.y
    if args.pointer:
        y = fileio.povm_from_obj(fileio.load_json(args.pointer))
    tol = args.tol if args.tol is not None else CHECK_TOL
    check = dilate.is_generalized_dilation(y, z, spec, tol)
    obj = {"holds": check.holds, "residual": float(check.residual), "tol": tol}
    _emit(args, obj, [f"holds: {check.holds}", f"residual: {_fmt(check.residual)}"])
    return 0 if check.holds else 2


def _cmd_dilate_probcheck(args, config) -> int:
    spec = fileio.dilation_from_obj(fileio.load_json(args.spec))
    z = fileio.povm_from_obj(fileio.load_json(args.target))
    tol = args.tol if args.tol is not None else GENERAL_TOL
    report = dilate.check_tuning_probabilistic(
        spec, z, n_states=args.n_states, seed=config.seed, tol=tol
    )
    obj = {
        "max_gap": float(report.max_gap),
        "holds": report.holds,
        "operator_holds": report.operator_holds,
        "agrees": report.agrees,
        "vacuous": report.vacuous,
        "n_states": report.n_states,
    }
    _emit(args, obj, [
        f"max gap over {report.n_states} states: {_fmt(report.max_gap)}",
        f"holds: {report.holds} (operator check: {report.operator_holds})",
    ] + (["vacuous: no states sampled"] if report.vacuous else []))
    return 0 if report.holds and report.agrees else 2


def _cmd_tuned(args, config) -> int:
    obj = fileio.load_json(args.claims)
    pairs_obj = obj.get("pairs") if isinstance(obj, dict) else None
    if not isinstance(pairs_obj, list):
        raise SchemaError("claims.pairs", "expected an array of {y, z, spec} objects")
    pairs = []
    specs = []
    for i, entry in enumerate(pairs_obj):
        here = f"claims.pairs[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(here, "expected an object")
        y = fileio.povm_from_obj(entry.get("y"), f"{here}.y")
        z = fileio.povm_from_obj(entry.get("z"), f"{here}.z")
        spec = fileio.dilation_from_obj(entry.get("spec"), f"{here}.spec")
        pairs.append((y, z))
        specs.append(spec)
    tol = args.tol if args.tol is not None else CHECK_TOL
    cert = dilate.verify_tuned(pairs, specs, tol)
    payload = fileio.certificate_to_obj(cert)
    if args.out:
        fileio.save_json(args.out, payload)
    lines = [f"tuned: {cert.tuned}" + (" (vacuous)" if cert.vacuous else "")]
    lines += [f"  pair {i}: residual {_fmt(p.residual)}" for i, p in enumerate(cert.pairs)]
    _emit(args, payload, lines)
    return 0 if cert.tuned else 2


def _cmd_discover(args, config) -> int:
    table, dim_hint = fileio.table_from_obj(fileio.load_json(args.table))
    if args.scan_dim:
        try:
            lo, hi = args.scan_dim.split("..")
            dims = list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise SchemaError("--scan-dim", "expected MIN..MAX")
        if not dims or dims[0] < 1:
            raise SchemaError("--scan-dim", "range must start at 1 or above")
    elif args.dim:
        dims = [args.dim]
    elif dim_hint:
        dims = [dim_hint]
    else:
        raise SchemaError("arguments", "need --dim, --scan-dim, or a dim_hint in the table")
    scanned = []
    chosen = None
    for d in dims:
        result = sicrep.discover_system(
            table, d, max_iters=args.max_iters, tol=args.fit_tol,
            restarts=args.restarts, seed=config.seed,
        )
        scanned.append({"dim": d, "feasible": result.feasible,
                        "residual": float(result.residual)})
        if result.feasible:
            chosen = (d, result)
            break
    obj = {"scanned": scanned, "feasible": chosen is not None}
    lines = [
        f"dim {row['dim']}: {'feasible' if row['feasible'] else 'infeasible'}"
        f" (residual {_fmt(row['residual'])})"
        for row in scanned
    ]
    if chosen is not None:
        d, result = chosen
        obj.update({
            "dim": d,
            "residual": float(result.residual),
            "restarts_used": result.restarts_used,
            "states": [fileio.state_to_obj(s) for s in result.states],
            "povms": [fileio.povm_to_obj(p) for p in result.povms],
        })
        lines.append(f"model found in dim {d} after {result.restarts_used} restart(s)")
    else:
        lines.append("no dimension in range admits a model at this tolerance")
    _emit(args, obj, lines)
    return 0


def _cmd_agent_classify(args, config) -> int:
    state = fileio.agent_from_obj(fileio.load_json(args.agent))
    if (args.tuning is None) == (args.candidates is None):
        raise SchemaError("arguments", "give exactly one of --tuning or --candidates")
    if args.tuning:
        cert = fileio.certificate_from_obj(fileio.load_json(args.tuning))
        z_set = [p.z for p in cert.pairs]
    else:
        obj = fileio.load_json(args.candidates)
        povms_obj = obj.get("povms") if isinstance(obj, dict) else obj
        if not isinstance(povms_obj, list):
            raise SchemaError("candidates", 'expected an array or {"povms": [...]}')
        z_set = [fileio.povm_from_obj(p, f"candidates[{i}]") for i, p in enumerate(povms_obj)]
    case = agentmod.classify_extension(list(state.direct.values()), z_set, tol=config.tol)
    _emit(args, {"case": case}, [f"case: {case}"])
    return 0


def _cmd_agent_incorporate(args, config) -> int:
    state = fileio.agent_from_obj(fileio.load_json(args.agent))
    cert = fileio.certificate_from_obj(fileio.load_json(args.tuning))
    new_state, report = agentmod.incorporate(
        state, args.system, cert, args.mode, tol=config.tol, force=args.force
    )
    if args.out:
        fileio.save_json(args.out, fileio.agent_to_obj(new_state))
    obj = {
        "mode": report.mode,
        "case": report.case,
        "comparison": report.comparison,
        "final_label": report.final_label,
        "forced": report.forced,
        "final_set": [fileio.povm_to_obj(p) for p in report.final_set],
        "direct_measurements": sorted(new_state.direct),
    }
    lines = [
        f"case: {report.case} ({report.mode})",
        f"final class {report.final_label}, comparison {report.comparison}",
        f"direct measurements now: {', '.join(sorted(new_state.direct)) or '(none)'}",
    ] + ([f"written to {args.out}"] if args.out else [])
    _emit(args, obj, lines)
    return 0


def _cmd_agent_deconstruct(args, config) -> int:
    state = fileio.agent_from_obj(fileio.load_json(args.agent))
    new_state = agentmod.deconstruct(state, args.measurement)
    obj = fileio.agent_to_obj(new_state)
    if args.out:
        fileio.save_json(args.out, obj)
    system_name = new_state.history[-1]["system"]
    lines = [
        f"measurement {args.measurement!r} moved to external system {system_name!r}",
        f"direct measurements now: {', '.join(sorted(new_state.direct)) or '(none)'}",
    ] + ([f"written to {args.out}"] if args.out else [])
    _emit(args, obj, lines)
    return 0


def _cmd_demo(args, config) -> int:
    sic = sicrep.build_sic(2)
    rho = basis_state(2, 0)
    zbasis = computational_povm(2)
    p = sicrep.state_to_sic_probs(rho, sic)
    r = sicrep.povm_to_conditional(sic, zbasis)
    q_quantum = sicrep.urgleichung(p, r)
    q_classical = sicrep.classical_rule(p, r)
    gap = float(abs(q_quantum.probs[0] - q_classical.probs[0]))

    qubit_sic_spec = dilate.naimark_construct(sic.povm)
    naimark_check = dilate.is_generalized_dilation(qubit_sic_spec.y, sic.povm, qubit_sic_spec)

    merge = post_process(zbasis, StochasticMatrix.merge_all(2))
    permuted = post_process(zbasis, StochasticMatrix.deterministic([1, 0], 2, 2))
    fixtures = {
        "downgrade": (["Z"], [zbasis], [merge]),
        "duplicate": (["Z"], [zbasis], [permuted]),
        "upgrade": (["1"], [trivial_povm(2)], [zbasis]),
        "innovation": (["Z"], [zbasis], [xbasis_povm()]),
    }
    rows = []
    for case, (_, x_set, z_set) in fixtures.items():
        for mode in agentmod.MODES:
            _, comparison = agentmod.final_measurements(case, mode, x_set, z_set)
            rows.append({
                "case": case,
                "mode": mode,
                "final": agentmod.final_label(case, mode),
                "comparison": comparison,
            })

    obj = {
        "reference_probabilities": [float(v) for v in p.probs],
        "born": [float(v) for v in q_quantum.probs],
        "classical": [float(v) for v in q_classical.probs],
        "classical_gap": gap,
        "naimark_probe_dim": qubit_sic_spec.dim_s,
        "naimark_residual": float(naimark_check.residual),
        "extension_table": rows,
    }
    lines = [
        "qubit worked example (standard-basis state, standard-basis measurement)",
        f"  reference probabilities p: {', '.join(_fmt(v) for v in p.probs)}",
        f"  quantum update  q: {', '.join(_fmt(v) for v in q_quantum.probs)}",
        f"  classical update q: {', '.join(_fmt(v) for v in q_classical.probs)}",
        f"  gap on outcome 0: {_fmt(gap)} (exactly 1/3)",
        "",
        "canonical dilation of the 4-outcome qubit reference measurement",
        f"  probe dimension {qubit_sic_spec.dim_s}, "
        f"verification residual {_fmt(naimark_check.residual)}",
        "",
        "extension taxonomy (final class and comparison to the old set)",
    ]
    for row in rows:
        lines.append(
            f"  {row['case']:<10} {row['mode']:<9} -> {row['final']:<6} {row['comparison']}"
        )
    _emit(args, obj, lines)
    return 0


# ------------------------------------------------------------------ wiring

def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="override the decision tolerance (default: per operation)")
    common.add_argument("--seed", type=int, default=0, help="seed for any randomness")
    common.add_argument("--json", action="store_true", help="emit one JSON object")

    parser = _Parser(prog="mf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check a JSON file's invariants")
    p.add_argument("file")
    p.add_argument("--kind", default="povm",
                   choices=["povm", "state", "channel", "dilation", "sic", "table", "agent"])
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("born", parents=[common], help="outcome distribution of a measurement")
    p.add_argument("--state", required=True)
    p.add_argument("--povm", required=True)
    p.set_defaults(func=_cmd_born)

    sic_p = sub.add_parser("sic", help="reference-measurement operations")
    sic_sub = sic_p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    p = sic_sub.add_parser("build", parents=[common])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sic_build)
    p = sic_sub.add_parser("probs", parents=[common])
    p.add_argument("--state", required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--sic")
    p.set_defaults(func=_cmd_sic_probs)
    p = sic_sub.add_parser("state", parents=[common])
    p.add_argument("--probs")
    p.add_argument("--probs-file")
    p.add_argument("--dim", type=int)
    p.add_argument("--sic")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sic_state)

    for name, fn in [("urgleichung", _cmd_urgleichung), ("classical", _cmd_classical)]:
        p = sub.add_parser(name, parents=[common],
                           help=f"apply the {'quantum' if name == 'urgleichung' else 'classical'} update rule")
        p.add_argument("--p-file")
        p.add_argument("--r-file")
        p.add_argument("--state")
        p.add_argument("--povm")
        p.add_argument("--dim", type=int)
        p.add_argument("--sic")
        p.set_defaults(func=fn)

    p = sub.add_parser("compare", parents=[common], help="post-processing order of two POVMs")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("umax", parents=[common], help="optimal expected utility of a channel")
    p.add_argument("--model", required=True)
    p.add_argument("--channel", required=True)
    p.set_defaults(func=_cmd_umax)

    dil_p = sub.add_parser("dilate", help="apparatus constructions and checks")
    dil_sub = dil_p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    p = dil_sub.add_parser("naimark", parents=[common])
    p.add_argument("--povm", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_dilate_naimark)
    p = dil_sub.add_parser("verify", parents=[common])
    p.add_argument("--spec", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--pointer")
    p.set_defaults(func=_cmd_dilate_verify)
    p = dil_sub.add_parser("probcheck", parents=[common])
    p.add_argument("--spec", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--n-states", type=int, default=50)
    p.set_defaults(func=_cmd_dilate_probcheck)

    p = sub.add_parser("tuned", parents=[common], help="verify a batch of dilation claims")
    p.add_argument("--claims", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_tuned)

    p = sub.add_parser("discover", parents=[common],
                       help="fit a quantum model to a probability table")
    p.add_argument("--table", required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--scan-dim", help="try each dimension in MIN..MAX")
    p.add_argument("--fit-tol", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--restarts", type=int, default=20)
    p.set_defaults(func=_cmd_discover)

    agent_p = sub.add_parser("agent", help="measurement-set bookkeeping")
    agent_sub = agent_p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    p = agent_sub.add_parser("classify", parents=[common])
    p.add_argument("--agent", required=True)
    p.add_argument("--tuning")
    p.add_argument("--candidates")
    p.set_defaults(func=_cmd_agent_classify)
    p = agent_sub.add_parser("incorporate", parents=[common])
    p.add_argument("--agent", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--tuning", required=True)
    p.add_argument("--mode", required=True, choices=["inclusive", "exclusive"])
    p.add_argument("--force", action="store_true",
                   help="postulate the extension even if the certificate fails")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_agent_incorporate)
    p = agent_sub.add_parser("deconstruct", parents=[common])
    p.add_argument("--agent", required=True)
    p.add_argument("--measurement", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_agent_deconstruct)

    p = sub.add_parser("demo", parents=[common], help="worked qubit narrative")
    p.set_defaults(func=_cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is not None and args.tol <= 0:
        parser.error("--tol must be positive")
    config = CliConfig(
        tol=args.tol if args.tol is not None else GENERAL_TOL,
        seed=args.seed,
        output="json" if args.json else "human",
    )
    try:
        return args.func(args, config)
    except ValueError as exc:  # includes SchemaError and all domain errors
        if args.json:
            sys.stdout.write(fileio.dump_json({"error": str(exc)}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
