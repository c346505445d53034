"""Command-line surface.

``stab run <file>`` executes one scenario and writes CSV + JSON reports;
``stab compute <sub> <json>`` does a one-shot computation printed as JSON;
``stab suite`` runs the packaged scenario corpus plus a seeded law check.

Exit codes: 0 success (and expectation match), 1 parse or validation error,
2 runtime domain violation, 3 verdict mismatch against an expectation block.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from pathlib import Path

from .domains import ZZ, domain_from_descriptor
from .modules import FpModule, Ideal, DomainViolation, NotWellDefined
from .invariants import ass, depth, DEPTH_INF
from .modules import HomSpace
from .functors import OscillatingFunctor, ExponentSet
from .laws import check_functor_laws
from .scenario import (ScenarioError, parse_scenario, run_scenario,
                       report_csv, report_json, build_functor, _Env, _mat, _elem)


def _fail_parse(message):
    print(f"error: {message}", file=sys.stderr)
    return 1


def _load_json(text, filename):
    try:
        return json.loads(text), None
    except json.JSONDecodeError as exc:
        return None, f"{filename}:{exc.lineno}:{exc.colno}: {exc.msg}"


def _cmd_run(args):
    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as exc:
        return _fail_parse(f"{path}: {exc}")
    doc, err = _load_json(text, str(path))
    if err:
        return _fail_parse(err)
    try:
        sc = parse_scenario(doc)
    except ScenarioError as exc:
        return _fail_parse(f"{path}: {exc}")
    horizon = args.horizon if args.horizon is not None else None
    window = args.window if args.window is not None else None
    try:
        outcome = run_scenario(sc, horizon, window)
    except DomainViolation as exc:
        print(f"domain violation: {exc}", file=sys.stderr)
        return 2
    outdir = Path(args.out) if args.out else Path(doc.get("out", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / f"{sc.name}.csv").write_text(report_csv(sc, outcome))
    (outdir / f"{sc.name}.json").write_text(report_json(sc, outcome))
    summary = _summary_line(sc, outcome)
    print(summary)
    if sc.expect is not None and not outcome.expect_ok:
        for failure in outcome.expect_failures:
            print(f"  mismatch: {failure}", file=sys.stderr)
        return 3
    return 0


def _summary_line(sc, outcome):
    rep = outcome.result.ass_report
    parts = [f"{sc.name}: ass={rep.status}"]
    if rep.n0 is not None:
        parts.append(f"n0={rep.n0}")
    dep = outcome.result.depth_report
    if dep is not None:
        parts.append(f"depth={dep.status}")
        if dep.n0 is not None:
            parts.append(f"depth_n0={dep.n0}")
    if outcome.artin_d is not None:
        parts.append(f"artin_rees_d={outcome.artin_d}")
    if sc.expect is not None:
        parts.append("expect=ok" if outcome.expect_ok else "expect=FAIL")
    return " ".join(parts)


def _depth_str(v):
    return "inf" if v == DEPTH_INF else str(int(v))


def _cmd_compute(args):
    doc, err = _load_json(args.json if args.json != "-" else sys.stdin.read(),
                          "<args>")
    if err:
        return _fail_parse(err)
    try:
        domain = domain_from_descriptor(doc.get("backend", {"kind": "integers"}))
    except (ValueError, KeyError) as exc:
        return _fail_parse(str(exc))
    try:
        out = _compute(args.sub, domain, doc)
    except (ScenarioError, ValueError, KeyError, NotWellDefined) as exc:
        return _fail_parse(str(exc))
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _compute(sub, domain, doc):
    def need(key):
        if key not in doc:
            raise ScenarioError(key, "missing required field")
        return doc[key]

    def mat_json(m):
        return [[domain.elem_to_json(a) for a in row] for row in m.data]

    if sub == "snf":
        d, u, v = _mat(domain, need("matrix"), "matrix").snf()
        return {"d": mat_json(d), "u": mat_json(u), "v": mat_json(v),
                "diagonal": [domain.elem_to_json(a) for a in d.diagonal()
                             if not domain.is_zero(a)]}
    if sub == "hnf":
        h, u = _mat(domain, need("matrix"), "matrix").hnf()
        return {"h": mat_json(h), "u": mat_json(u)}
    if sub == "ass":
        module = FpModule.from_json(domain, need("module"))
        return {"ass": ass(module).to_json()}
    if sub == "depth":
        module = FpModule.from_json(domain, need("module"))
        ideal = Ideal(domain, _elem(domain, need("ideal"), "ideal"))
        return {"depth": _depth_str(depth(ideal, module))}
    if sub == "hom":
        source = FpModule.from_json(domain, need("source"))
        target = FpModule.from_json(domain, need("target"))
        return {"module": HomSpace(source, target).module.dec_module().to_json()}
    if sub == "eval":
        env = _Env(domain, doc)
        functor = build_functor(env, need("functor"))
        argument = env.module(need("argument"), "argument")
        value = functor(argument)
        return {"value": value.dec_module().to_json()}
    raise ScenarioError("sub", f"unknown compute subcommand {sub!r}")


def _iter_packaged_scenarios():
    base = resources.files("stab").joinpath("scenarios")
    for entry in sorted(base.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            yield entry.name, entry.read_text()


def _cmd_suite(args):
    failures = 0
    count = 0
    for name, text in _iter_packaged_scenarios():
        doc, err = _load_json(text, name)
        if err:
            print(f"FAIL {name}: {err}")
            failures += 1
            continue
        try:
            sc = parse_scenario(doc)
            outcome = run_scenario(sc, args.horizon, args.window)
        except (ScenarioError, DomainViolation) as exc:
            print(f"FAIL {name}: {exc}")
            failures += 1
            continue
        count += 1
        ok = outcome.expect_ok if sc.expect is not None else True
        status = "ok  " if ok else "FAIL"
        print(f"{status} {_summary_line(sc, outcome)}")
        if not ok:
            failures += 1
        if args.out:
            outdir = Path(args.out)
            outdir.mkdir(parents=True, exist_ok=True)
            (outdir / f"{sc.name}.csv").write_text(report_csv(sc, outcome))
            (outdir / f"{sc.name}.json").write_text(report_json(sc, outcome))
    rng = random.Random(args.seed)
    osc = OscillatingFunctor(ZZ, {2: ExponentSet(progressions=[(2, 2)]),
                                  3: ExponentSet(members=[1])})
    law_failures = check_functor_laws(osc, ZZ, rng, trials=20, torsion_only=True)
    if law_failures:
        for f in law_failures[:5]:
            print(f"FAIL laws: {f}")
        failures += 1
    else:
        print(f"ok   functor-laws seed={args.seed} trials=20")
    print(f"{count} scenarios, {failures} failures")
    return 0 if failures == 0 else 3


def main(argv=None):
    parser = argparse.ArgumentParser(prog="stab",
                                     description="ideal-power stabilization scans "
                                                 "over Euclidean-domain modules")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario file")
    p_run.add_argument("file")
    p_run.add_argument("--horizon", type=int, default=None)
    p_run.add_argument("--window", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(func=_cmd_run)

    p_compute = sub.add_parser("compute", help="one-shot computation")
    p_compute.add_argument("sub", choices=["snf", "hnf", "ass", "depth", "hom", "eval"])
    p_compute.add_argument("json", help="JSON arguments, or '-' for stdin")
    p_compute.set_defaults(func=_cmd_compute)

    p_suite = sub.add_parser("suite", help="run the packaged scenario corpus")
    p_suite.add_argument("--horizon", type=int, default=None)
    p_suite.add_argument("--window", type=int, default=None)
    p_suite.add_argument("--out", default=None)
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.set_defaults(func=_cmd_suite)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
