"""Wall-clock comparison of the gmpy2 and pure-Python coefficient backends.

Each case runs in a fresh interpreter (the backend is picked at import time)
and the best of ``--repeat`` runs is reported.  The JSON reports of the two
backends are also compared byte for byte.

    python benchmarks/bench_backend.py [--repeat 3]
"""

import argparse
import os
import subprocess
import sys
import time

CASES = {
    "three axes, milnor": ("milnor", "vars: x,y,z\nequations:\n  x*y\n  y*z\n  x*z\nend\n"),
    "(3,4,5) curve, milnor": ("milnor", "vars: x,y,z\nparametrization: u^3, u^4, u^5\n"),
    "(3,5,7) curve, milnor": ("milnor", "vars: x,y,z\nparametrization: u^3, u^5, u^7\n"),
    "(4,5,6,7) curve, milnor": ("milnor", "vars: x,y,z,w\nparametrization: u^4, u^5, u^6, u^7\n"),
    "Whitney family, whitney": (
        "whitney",
        "vars: x,y,z,w\nparam: t\nparametrization: u^4, u^7+t*u^6, u^9, u^10\nsamples: 0, 1\n",
    ),
}


def run_once(command, text, pure):
    env = dict(os.environ)
    env.pop("CURVESING_PURE_PYTHON", None)
    if pure:
        env["CURVESING_PURE_PYTHON"] = "1"
    start = time.perf_counter()
    out = subprocess.run(
        [sys.executable, "-m", "curvesing", command, "-", "--json"],
        input=text, capture_output=True, text=True, env=env, check=True,
    )
    return time.perf_counter() - start, out.stdout


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--only", help="run only cases whose name contains this text")
    args = ap.parse_args()

    print(f"{'case':<28} {'gmpy2 s':>9} {'fraction s':>11} {'speedup':>8}  same output")
    for name, (command, text) in CASES.items():
        if args.only and args.only not in name:
            continue
        best = {}
        outputs = {}
        for pure in (False, True):
            times = []
            for _ in range(args.repeat):
                dt, out = run_once(command, text, pure)
                times.append(dt)
            best[pure] = min(times)
            outputs[pure] = out
        same = outputs[False] == outputs[True]
        print(
            f"{name:<28} {best[False]:>9.2f} {best[True]:>11.2f} "
            f"{best[True] / best[False]:>7.2f}x  {same}"
        )


if __name__ == "__main__":
    main()
