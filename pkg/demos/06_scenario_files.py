"""
Scenario files and reports
==========================

A scenario JSON names a backend, modules, ideals and morphisms, picks a
family and a functor, and optionally pins expectations.  The same document
drives the `stab run` command; here we use the library API directly and
print the flat CSV report.
"""

import json

from stab.scenario import parse_scenario, run_scenario, report_csv, report_json

doc = {
    "name": "demo_quotients",
    "backend": {"kind": "integers"},
    "modules": {"M": {"rank": 1, "factors": ["8"]}, "R": {"rank": 1, "factors": []}},
    "ideals": {"I": "2", "J": "2"},
    "submodules": {"full": [["1"]]},
    "morphisms": {"beta4": {"source": "R", "target": "R", "matrix": [["4"]]}},
    "family": {"kind": "quotient_powers", "module": "M", "ideal": "I"},
    "functor": {"kind": "identity"},
    "depth_ideal": "J",
    "horizon": 12,
    "window": 4,
    "artin_rees": {"beta": "beta4", "n_prime": "full", "ideal": "I", "horizon": 10},
    "expect": {"ass": {"status": "stable", "n0_max": 30},
               "depth": {"status": "stable"},
               "artin_rees_d": 2},
}

scenario = parse_scenario(doc)
outcome = run_scenario(scenario)
print("expectations met:", outcome.expect_ok)
print()
print(report_csv(scenario, outcome))

verdicts = json.loads(report_json(scenario, outcome))
print("ass verdict:", verdicts["ass_verdict"])
print("depth verdict:", verdicts["depth_verdict"])
print("artin-rees d:", verdicts["artin_rees_d"])

# The packaged corpus (see `stab suite`) contains thirty such documents:
# identity scans over both backends, derived and bespoke coherent functors,
# torsion functors, localized middle-finite complexes, and the three
# prescribed oscillation patterns.
