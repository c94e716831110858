"""Command line: run the staged simulation, verify closed forms, recover masks.

Subcommands
-----------
run         simulate one oracle and report coherences at every stage
verify      cross-check dense values against the closed forms (n <= 5)
recover     repeated mask recovery with query statistics
sweep       closed-form table over dimensions 2, 4, ..., 2^n_max
gen-oracle  write a function table in the text format

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 capability
error.  ``--seed`` falls back to the SIMON_COHERENCE_SEED environment
variable, then to 0, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import closed_forms, measures
from .measures import CoherenceMeasure, METHOD_CLOSED, METHOD_DENSE, METHOD_PURE
from .recovery import recover
from .simon import (
    FunctionTableError,
    SimonFunction,
    Stage,
    bits_to_int,
    format_function_table,
    int_to_bits,
    measure_second_register,
    parse_function_table,
    random_bijection,
    random_two_to_one,
    run_stages,
)
from .states import density_of, hadamard_first_register
from .tolerances import TOL

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_CAPABILITY = 3

MAX_DENSE_QUBITS = 5
MAX_SIM_QUBITS = 11
SEED_ENV_VAR = "SIMON_COHERENCE_SEED"

MEASURE_FAMILIES = ("tsallis", "l1p", "rel_entropy", "skew_info", "l1")
DEFAULT_FAMILIES = "tsallis,l1p,rel_entropy,skew_info"

L1_QUARTER_FORM = "N^2/4-1"
L1_HALF_FORM = "N^2/2-1"


class UsageError(Exception):
    pass


class CapabilityError(Exception):
    pass


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None


def _subseed(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=key)


def _parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated numbers, got {text!r}") from None
    if not values:
        raise UsageError(f"{flag} must not be empty")
    return values


def _build_panel(families_text: str, alphas: tuple[float, ...], ps: tuple[float, ...]):
    panel: list[CoherenceMeasure] = []
    try:
        for family in (part.strip() for part in families_text.split(",") if part.strip()):
            if family not in MEASURE_FAMILIES:
                raise UsageError(
                    f"unknown measure {family!r}; choose from {', '.join(MEASURE_FAMILIES)}"
                )
            if family == "tsallis":
                panel.extend(measures.tsallis(a) for a in alphas)
            elif family == "l1p":
                panel.extend(measures.l1p(p) for p in ps)
            elif family == "rel_entropy":
                panel.append(measures.REL_ENTROPY)
            elif family == "skew_info":
                panel.append(measures.SKEW_INFO)
            else:
                panel.append(measures.L1)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not panel:
        raise UsageError("--measures produced an empty panel")
    return tuple(panel)


def _parse_mask(s_text: str, n: int) -> int:
    if len(s_text) != n:
        raise UsageError(f"--s must be exactly {n} bits, got {s_text!r}")
    try:
        return bits_to_int(s_text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _random_mask(n: int, seed: int) -> int:
    rng = np.random.default_rng(_subseed(seed, 0))
    return int(rng.integers(1, 1 << n))


def _build_oracle(n: int, s: int, seed: int, *, trial: int | None = None) -> SimonFunction:
    key = (1,) if trial is None else (4, trial)
    if s == 0:
        return random_bijection(n, _subseed(seed, *key))
    return random_two_to_one(n, s, _subseed(seed, *key))


def _load_oracle(args, seed: int) -> SimonFunction:
    if getattr(args, "function_file", None):
        try:
            text = Path(args.function_file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.function_file}: {exc}") from None
        f = parse_function_table(text)
        if args.n is not None and args.n != f.n:
            raise UsageError(f"--n {args.n} conflicts with function file header n={f.n}")
        if args.s is not None and _parse_mask(args.s, f.n) != f.s:
            raise UsageError(f"--s {args.s} conflicts with function file header")
        return f
    if args.n is None:
        raise UsageError("--n is required when no --function-file is given")
    _require_sim_size(args.n)
    s = _parse_mask(args.s, args.n) if args.s is not None else _random_mask(args.n, seed)
    return _build_oracle(args.n, s, seed)


def _require_sim_size(n: int) -> None:
    if n < 1:
        raise UsageError(f"--n must be at least 1, got {n}")
    if n > MAX_SIM_QUBITS:
        raise CapabilityError(
            f"state-vector simulation is limited to n <= {MAX_SIM_QUBITS}, got n={n}"
        )


def _dense_enabled(mode: str, n: int) -> bool:
    if mode == "off":
        return False
    if mode == "on":
        if n > MAX_DENSE_QUBITS:
            raise CapabilityError(
                f"dense density-matrix path is limited to n <= {MAX_DENSE_QUBITS}, got n={n}"
            )
        return True
    return n <= MAX_DENSE_QUBITS


def _closed_form_value(stage: Stage, measure: CoherenceMeasure, dim: int, s: int) -> float | None:
    # the oracle stage shares the hadamard-stage value: a basis permutation
    # cannot change any coherence in the panel
    if stage in (Stage.HADAMARD, Stage.ORACLE):
        return closed_forms.hadamard_stage_coherence(dim, measure)
    if stage == Stage.FINAL_HADAMARD and s != 0:
        return closed_forms.final_stage_coherence(dim, measure)
    return None


def _measure_json(measure: CoherenceMeasure) -> dict:
    return {"measure": measure.kind, "params": measure.params_dict()}


def _regime_json(dim: int) -> dict:
    verdict = closed_forms.classify_regime(dim)
    return {
        "dim": verdict.dim,
        "regime": verdict.regime,
        "deltas": [
            _measure_json(measure) | {"value": float(value)}
            for measure, value in verdict.deltas.items()
        ],
    }


def _stage_sequence(f: SimonFunction, seed: int):
    stages = run_stages(f)
    observed, collapsed = measure_second_register(stages[Stage.ORACLE], f, _subseed(seed, 2))
    post = hadamard_first_register(collapsed)
    ordered = [
        (Stage.INITIAL, stages[Stage.INITIAL]),
        (Stage.HADAMARD, stages[Stage.HADAMARD]),
        (Stage.ORACLE, stages[Stage.ORACLE]),
        (Stage.FINAL_HADAMARD, stages[Stage.FINAL_HADAMARD]),
        (Stage.POST_MEASURE, post),
    ]
    return ordered, observed


def cmd_run(args) -> int:
    seed = _resolve_seed(args.seed)
    alphas = _parse_floats(args.alphas, "--alphas")
    ps = _parse_floats(args.ps, "--ps")
    panel = _build_panel(args.measures, alphas, ps)
    f = _load_oracle(args, seed)
    _require_sim_size(f.n)
    dense_on = _dense_enabled(args.dense, f.n)
    dim = 1 << f.n

    ordered, observed = _stage_sequence(f, seed)
    stage_entries = []
    discrepancies = []
    any_flagged = False
    for stage, state in ordered:
        rho = density_of(state) if dense_on else None
        values = []
        stage_spread = 0.0
        for measure in panel:
            by_method: dict[str, float] = {}
            if dense_on:
                by_method[METHOD_DENSE] = measures.dense_coherence(rho, measure)
            by_method[METHOD_PURE] = measures.pure_state_coherence(state, measure)
            closed = _closed_form_value(stage, measure, dim, f.s)
            if closed is not None:
                by_method[METHOD_CLOSED] = closed
            for method, value in by_method.items():
                values.append(_measure_json(measure) | {"method": method, "value": float(value)})
            spread = max(by_method.values()) - min(by_method.values())
            stage_spread = max(stage_spread, spread)
            flagged = spread >= TOL.cross_method
            any_flagged = any_flagged or flagged
            discrepancies.append(
                {"stage": stage.value}
                | _measure_json(measure)
                | {"max_difference": float(spread), "flagged": flagged}
            )
        entry = {"stage": stage.value}
        if stage is Stage.POST_MEASURE:
            entry["observed"] = int_to_bits(observed, f.n)
        entry["max_discrepancy"] = float(stage_spread)
        entry["values"] = values
        stage_entries.append(entry)

    doc = {
        "config": {
            "command": "run",
            "n": f.n,
            "s": int_to_bits(f.s, f.n),
            "seed": seed,
            "alphas": [float(a) for a in alphas],
            "ps": [float(p) for p in ps],
            "measures": [m.label() for m in panel],
            "format": args.format,
            "function_file": args.function_file,
            "dense": dense_on,
        },
        "stages": stage_entries,
        "regime": _regime_json(dim) if f.s != 0 else None,
        "discrepancies": discrepancies,
    }
    _emit(_render(doc, args.format), args.output)
    return EXIT_MISMATCH if any_flagged else EXIT_OK


def cmd_verify(args) -> int:
    seed = _resolve_seed(args.seed)
    alphas = _parse_floats(args.alphas, "--alphas")
    ps = _parse_floats(args.ps, "--ps")
    panel = _build_panel(args.measures, alphas, ps)
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < 1:
        raise UsageError(f"--n must be at least 1, got {args.n}")
    if args.n > MAX_DENSE_QUBITS:
        raise CapabilityError(
            f"verify needs the dense path and is limited to n <= {MAX_DENSE_QUBITS}, got n={args.n}"
        )
    s = _parse_mask(args.s, args.n) if args.s is not None else _random_mask(args.n, seed)
    if s == 0:
        raise UsageError("verify requires a nonzero mask; the final-stage closed forms assume one")
    f = _build_oracle(args.n, s, seed)
    dim = 1 << f.n

    stages = run_stages(f)
    checked = [Stage.HADAMARD, Stage.ORACLE, Stage.FINAL_HADAMARD]
    densities = {stage: density_of(stages[stage]) for stage in checked}
    checks = []
    all_ok = True
    for stage in checked:
        for measure in panel:
            dense_value = measures.dense_coherence(densities[stage], measure)
            pure_value = measures.pure_state_coherence(stages[stage], measure)
            closed_value = _closed_form_value(stage, measure, dim, f.s)
            values = {
                METHOD_DENSE: float(dense_value),
                METHOD_PURE: float(pure_value),
                METHOD_CLOSED: float(closed_value),
            }
            spread = max(values.values()) - min(values.values())
            ok = spread < TOL.cross_method
            all_ok = all_ok and ok
            checks.append(
                {"stage": stage.value}
                | _measure_json(measure)
                | {"values": values, "discrepancy": float(spread), "ok": ok}
            )

    deltas = []
    for measure in panel:
        closed_delta = closed_forms.coherence_delta(dim, measure)
        dense_delta = measures.dense_coherence(
            densities[Stage.FINAL_HADAMARD], measure
        ) - measures.dense_coherence(densities[Stage.HADAMARD], measure)
        spread = abs(closed_delta - dense_delta)
        ok = spread < TOL.cross_method
        all_ok = all_ok and ok
        deltas.append(
            _measure_json(measure)
            | {
                "closed_form": float(closed_delta),
                "dense": float(dense_delta),
                "discrepancy": float(spread),
                "ok": ok,
            }
        )

    conflict = _l1_conflict_report(seed)
    all_ok = all_ok and conflict["confirmed"] == L1_QUARTER_FORM

    doc = {
        "config": {
            "command": "verify",
            "n": f.n,
            "s": int_to_bits(f.s, f.n),
            "seed": seed,
            "alphas": [float(a) for a in alphas],
            "ps": [float(p) for p in ps],
            "measures": [m.label() for m in panel],
            "format": args.format,
        },
        "checks": checks,
        "deltas": deltas,
        "l1_conflict": conflict,
        "ok": all_ok,
    }
    _emit(_render(doc, args.format), args.output)
    return EXIT_OK if all_ok else EXIT_MISMATCH


def _l1_conflict_report(seed: int) -> dict:
    """Resolve the two candidate final-stage l1 closed forms by dense evaluation."""
    evidence = []
    confirmed = L1_QUARTER_FORM
    for n_probe, mask in ((2, 0b11), (3, 0b110)):
        f = random_two_to_one(n_probe, mask, _subseed(seed, 7, n_probe))
        rho = density_of(run_stages(f)[Stage.FINAL_HADAMARD])
        dense_value = measures.l1_coherence(rho)
        candidates = closed_forms.final_stage_l1_candidates(1 << n_probe)
        quarter_ok = abs(dense_value - candidates["quarter_form"]) < TOL.cross_method
        half_ok = abs(dense_value - candidates["half_form"]) < TOL.cross_method
        matches = L1_QUARTER_FORM if quarter_ok else (L1_HALF_FORM if half_ok else "neither")
        if matches != L1_QUARTER_FORM:
            confirmed = matches
        evidence.append(
            {
                "n": n_probe,
                "dense_l1": float(dense_value),
                "quarter_form": float(candidates["quarter_form"]),
                "half_form": float(candidates["half_form"]),
                "matches": matches,
            }
        )
    note = (
        "final-stage l1 closed form has two published candidates, "
        f"{L1_QUARTER_FORM} and {L1_HALF_FORM}; dense evaluation gives "
        f"{evidence[0]['dense_l1']:g} at n=2 and {evidence[1]['dense_l1']:g} at n=3, "
        f"confirming {confirmed} and ruling out "
        f"{L1_HALF_FORM if confirmed == L1_QUARTER_FORM else L1_QUARTER_FORM}"
    )
    return {
        "candidates": {"quarter_form": L1_QUARTER_FORM, "half_form": L1_HALF_FORM},
        "evidence": evidence,
        "confirmed": confirmed,
        "note": note,
    }


def cmd_recover(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.n is None:
        raise UsageError("--n is required")
    _require_sim_size(args.n)
    if args.trials < 1:
        raise UsageError(f"--trials must be positive, got {args.trials}")
    fixed_mask = _parse_mask(args.s, args.n) if args.s is not None else None

    successes = 0
    queries = []
    histogram: dict[str, int] = {}
    exhausted = 0
    for trial in range(args.trials):
        if fixed_mask is not None:
            mask = fixed_mask
        else:
            rng = np.random.default_rng(_subseed(seed, 6, trial))
            mask = int(rng.integers(1, 1 << args.n))
        f = _build_oracle(args.n, mask, seed, trial=trial)
        report = recover(f, _subseed(seed, 5, trial), args.max_queries)
        if report.s_hat is None:
            exhausted += 1
        elif report.verified and report.s_hat == f.s:
            successes += 1
        queries.append(report.queries)
        histogram[str(report.queries)] = histogram.get(str(report.queries), 0) + 1

    doc = {
        "config": {
            "command": "recover",
            "n": args.n,
            "s": args.s,
            "seed": seed,
            "trials": args.trials,
            "max_queries": args.max_queries,
            "format": args.format,
        },
        "trials": args.trials,
        "successes": successes,
        "success_rate": successes / args.trials,
        "mean_queries": float(np.mean(queries)),
        "max_queries_observed": int(max(queries)),
        "exhausted": exhausted,
        "query_histogram": {k: histogram[k] for k in sorted(histogram, key=int)},
    }
    _emit(_render(doc, args.format), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    alphas = _parse_floats(args.alphas, "--alphas")
    ps = _parse_floats(args.ps, "--ps")
    panel = _build_panel(args.measures, alphas, ps)
    if args.n_max < 1:
        raise UsageError(f"--n-max must be at least 1, got {args.n_max}")
    if args.n_max > closed_forms.MAX_CLOSED_FORM_BITS:
        raise CapabilityError(
            f"closed forms are exercised up to n = {closed_forms.MAX_CLOSED_FORM_BITS}, "
            f"got n-max={args.n_max}"
        )
    rows = []
    for n in range(1, args.n_max + 1):
        dim = 1 << n
        verdict = closed_forms.classify_regime(dim)
        entries = [
            _measure_json(measure)
            | {
                "hadamard": float(closed_forms.hadamard_stage_coherence(dim, measure)),
                "final": float(closed_forms.final_stage_coherence(dim, measure)),
                "delta": float(closed_forms.coherence_delta(dim, measure)),
            }
            for measure in panel
        ]
        rows.append({"n": n, "dim": dim, "regime": verdict.regime, "entries": entries})
    doc = {
        "config": {
            "command": "sweep",
            "n_max": args.n_max,
            "alphas": [float(a) for a in alphas],
            "ps": [float(p) for p in ps],
            "measures": [m.label() for m in panel],
            "format": args.format,
        },
        "rows": rows,
    }
    _emit(_render(doc, args.format), args.output)
    return EXIT_OK


def cmd_gen_oracle(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < 1:
        raise UsageError(f"--n must be at least 1, got {args.n}")
    s = _parse_mask(args.s, args.n) if args.s is not None else _random_mask(args.n, seed)
    f = _build_oracle(args.n, s, seed)
    _emit(format_function_table(f), args.output)
    return EXIT_OK


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["field", "value"])
    for field, value in _flatten(doc):
        writer.writerow([field, value])
    return buffer.getvalue()


def _flatten(node, prefix: str = ""):
    rows: list[tuple[str, str]] = []
    if isinstance(node, dict):
        for key, value in node.items():
            rows.extend(_flatten(value, f"{prefix}.{key}" if prefix else str(key)))
    elif isinstance(node, list):
        for index, value in enumerate(node):
            rows.extend(_flatten(value, f"{prefix}[{index}]"))
    else:
        rows.append((prefix, _format_scalar(node)))
    return rows


def _format_scalar(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _add_common(parser, *, n_flag=True, seed=True, panel=True, fmt=True) -> None:
    if n_flag:
        parser.add_argument("--n", type=int, default=None, help="first-register qubit count")
    if seed:
        parser.add_argument("--seed", type=int, default=None, help="deterministic seed")
    if panel:
        parser.add_argument("--alphas", default="0.5,2.0", help="comma-separated Tsallis orders")
        parser.add_argument("--ps", default="1.0,2.0", help="comma-separated matrix-norm exponents")
        parser.add_argument(
            "--measures",
            default=DEFAULT_FAMILIES,
            help=f"comma-separated families from {{{','.join(MEASURE_FAMILIES)}}}",
        )
    if fmt:
        parser.add_argument("--format", choices=("json", "csv"), default="json")
        parser.add_argument("--output", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simon-coherence",
        description="Stage-by-stage coherence analysis of the two-register hidden-mask circuit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate one oracle and report stage coherences")
    _add_common(run_p)
    run_p.add_argument("--s", default=None, help="hidden mask as an n-bit string; all zeros runs a bijection")
    run_p.add_argument("--function-file", default=None, help="load the oracle from a function table")
    run_p.add_argument("--dense", choices=("auto", "on", "off"), default="auto")
    run_p.set_defaults(handler=cmd_run)

    verify_p = sub.add_parser("verify", help="cross-check dense values against closed forms")
    _add_common(verify_p)
    verify_p.add_argument("--s", default=None, help="hidden mask as an n-bit string (nonzero)")
    verify_p.set_defaults(handler=cmd_verify)

    recover_p = sub.add_parser("recover", help="repeated mask recovery with query statistics")
    _add_common(recover_p, panel=False)
    recover_p.add_argument("--s", default=None, help="fixed mask; omitted means a fresh random mask per trial")
    recover_p.add_argument("--trials", type=int, default=100)
    recover_p.add_argument("--max-queries", type=int, default=None)
    recover_p.set_defaults(handler=cmd_recover)

    sweep_p = sub.add_parser("sweep", help="closed-form table over dimensions 2..2^n_max")
    _add_common(sweep_p, n_flag=False, seed=False)
    sweep_p.add_argument("--n-max", type=int, required=True)
    sweep_p.set_defaults(handler=cmd_sweep)

    gen_p = sub.add_parser("gen-oracle", help="write a function table in the text format")
    _add_common(gen_p, panel=False, fmt=False)
    gen_p.add_argument("--s", default=None, help="hidden mask as an n-bit string; all zeros makes a bijection")
    gen_p.add_argument("--output", default=None, help="write the table here instead of stdout")
    gen_p.set_defaults(handler=cmd_gen_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FunctionTableError as exc:
        print(f"error: invalid function table: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
