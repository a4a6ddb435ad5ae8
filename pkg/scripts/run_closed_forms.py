#!/usr/bin/env python3
"""Solve the three closed-form sanity instances and compare to hand values.

    min -x   on [-1, 2]              -> gamma = -2
    min -x^2 on [-1, 2] (a = 4)      -> gamma = -4
    Motzkin polynomial, no constraints -> gamma = 0
"""

from pathlib import Path

from soncbound.pipeline import PipelineOptions, solve_instance
from soncbound.poly import parse_instance

INSTANCES = Path(__file__).resolve().parent.parent / "instances"

CASES = [
    ("minx.json", PipelineOptions(), -2.0),
    ("minx2.json", PipelineOptions(exponents=(4,)), -4.0),
    ("motzkin.json", PipelineOptions(), 0.0),
    ("constrained.json", PipelineOptions(), -0.25),
]


def main() -> None:
    for name, options, expected in CASES:
        inst = parse_instance((INSTANCES / name).read_text())
        res = solve_instance(inst, options)
        err = abs(res.gamma_certified - expected) if res.gamma_certified is not None else float("nan")
        print(
            f"{name:18s} status={res.status:10s} "
            f"gamma={res.gamma_certified:+.8f} expected={expected:+.2f} |err|={err:.2e} "
            f"({res.seconds:.3f}s)"
        )


if __name__ == "__main__":
    main()
