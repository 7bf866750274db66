#!/usr/bin/env python3
"""End-to-end checks for the ringmix command line tool.

Usage: cli_smoke.py /path/to/ringmix
Exits nonzero if any check fails.
"""

import json
import os
import subprocess
import sys
import tempfile

BIN = sys.argv[1] if len(sys.argv) > 1 else "ringmix"
FAILS = []


def run(args, expect=0):
    proc = subprocess.run([BIN] + args, capture_output=True, text=True,
                          timeout=600)
    if proc.returncode != expect:
        FAILS.append(f"{' '.join(args)}: exit {proc.returncode}, wanted {expect}"
                     f"\n  stdout: {proc.stdout[:400]}"
                     f"\n  stderr: {proc.stderr[:400]}")
    return proc


def check(cond, label):
    if not cond:
        FAILS.append(label)


def jline(text, idx=0):
    lines = [l for l in text.splitlines() if l.strip()]
    return json.loads(lines[idx])


def main():
    tmp = tempfile.mkdtemp(prefix="ringmix_smoke_")

    # build: explicit edges, canonical line round trip
    p = run(["build", "--n", "12", "--edges", "2:7"])
    j = jline(p.stdout)
    check(j["instance"] == "n=12 k=1 hubs=2,7 match=1:2", "build canonical line")
    check(j["lengths"] == [5] and j["arcs"] == [5, 7], "build lengths/arcs")

    p = run(["--seed", "7", "build", "--n", "1000", "--k", "2"])
    inst = jline(p.stdout)["instance"]
    p2 = run(["build", "--instance", inst])
    check(jline(p2.stdout)["instance"] == inst, "build --instance round trip")

    # build: usage and config errors
    run(["build"], expect=2)
    run(["build", "--n", "12", "--edges", "2:2"], expect=2)
    run(["build", "--n", "12", "--k", "9999"], expect=2)
    run(["nonsense"], expect=2)
    run([], expect=2)

    # mix: plain cycle mixes; deterministic rotation never does
    p = run(["mix", "--n", "64", "--k", "0"])
    j = jline(p.stdout)
    check(j["mixed"] is True and j["tmix"] > 0, "mix cycle mixes")
    run(["mix", "--n", "32", "--k", "0", "--p", "1", "--q", "0", "--a", "0",
         "--t-max", "50"], expect=3)
    run(["mix"], expect=2)

    # mix: profile file
    prof = os.path.join(tmp, "prof.csv")
    p = run(["mix", "--instance", "n=12 k=1 hubs=2,7 match=1:2", "--profile",
             prof, "--full", "--t-max", "200", "--record-every", "10"])
    with open(prof) as f:
        head = f.readline().strip()
        rows = f.read().splitlines()
    check(head == "t,d" and len(rows) > 5, "mix profile csv")

    # track: endpoint identity holds on every emitted trajectory
    p = run(["--seed", "7", "track", "--n", "4096", "--k", "2", "--trials", "3"])
    lines = [json.loads(l) for l in p.stdout.splitlines() if l.strip()]
    check(len(lines) == 3, "track emits one line per trial")
    check(all(l["identity_ok"] for l in lines), "track endpoint identity")

    # track --decisions: rates near the closed form
    p = run(["--seed", "42", "track", "--n", "100000", "--edges", "0:50000",
             "--decisions", "--trials", "2000"])
    j = jline(p.stdout)
    check(j["g_count"] + j["j_count"] == j["trials"] - j["backtracks"],
          "decision counts add up")
    check(abs(j["p_g"] - j["p_g_closed_form"]) < 5 * j["se"],
          "decision rate near closed form")

    # spread: exact lattice prediction at m=1 on a prime cycle
    p = run(["spread", "--n", "101", "--edges", "0:50", "--m", "1",
             "--alpha", "0.1"])
    j = jline(p.stdout)
    check(abs(j["expected_window_hits"] - 42.0 / 101.0) < 1e-12,
          "window hit prediction")
    check(j["xi_count"] >= 1 and j["min_dist"] >= 0, "spread geometry fields")
    run(["spread", "--n", "64", "--k", "0"], expect=2)

    # sweep-lengths: summary, store, csv export, thread/resume determinism
    csv1 = os.path.join(tmp, "s1.csv")
    store = os.path.join(tmp, "store.jsonl")
    p = run(["--seed", "5", "--out", csv1, "sweep-lengths", "--n", "16",
             "--step", "3", "--store", store])
    j = jline(p.stdout)
    check(j["cells"] == 9, "sweep-lengths cell count")
    check(j["mixed"] + j["not_mixed"] + j["skipped"] == 9, "sweep summary adds up")
    with open(csv1) as f:
        check(f.readline().strip() == "x,y,tmix", "csv header")
    with open(store) as f:
        rec = json.loads(f.readline())
    check(rec["schema"] == 1 and rec["kind"] == "lengths", "store record shape")

    csv2 = os.path.join(tmp, "s2.csv")
    run(["--seed", "5", "--threads", "3", "--out", csv2, "sweep-lengths",
         "--n", "16", "--step", "3"])
    with open(csv1, "rb") as a, open(csv2, "rb") as b:
        check(a.read() == b.read(), "csv identical across thread counts")

    csv3 = os.path.join(tmp, "s3.csv")
    run(["--seed", "5", "--out", csv3, "sweep-lengths", "--n", "16",
         "--step", "3", "--store", store, "--resume"])
    with open(csv1, "rb") as a, open(csv3, "rb") as b:
        check(a.read() == b.read(), "csv identical after resume")

    # jsonl export format
    out_jl = os.path.join(tmp, "s.jsonl")
    run(["--seed", "5", "--out", out_jl, "--format", "jsonl", "sweep-lengths",
         "--n", "16", "--step", "3"])
    with open(out_jl) as f:
        check(json.loads(f.readline())["schema"] == 1, "jsonl export")

    # dominated sweep (horizon too short for anything to mix)
    run(["sweep-lengths", "--n", "16", "--step", "3", "--t-max", "2"], expect=3)
    run(["sweep-lengths"], expect=2)

    # sweep-positions
    p = run(["sweep-positions", "--n", "12", "--lengths", "3,3"])
    j = jline(p.stdout)
    check(j["cells"] == 12 and j["skipped"] == 3, "sweep-positions grid")
    run(["sweep-positions", "--n", "12", "--lengths", "0,3"], expect=2)

    # sorted curves
    p = run(["--seed", "11", "sorted", "--ns", "16,24", "--k", "2", "--step", "2"])
    lines = [json.loads(l) for l in p.stdout.splitlines() if l.strip()]
    check(len(lines) == 2 and lines[0]["n"] == 16 and lines[1]["n"] == 24,
          "sorted emits one line per size")
    check(all("q50" in l for l in lines), "sorted quantiles present")

    # exponent fit over small sizes
    p = run(["--seed", "13", "--threads", "2", "exponent", "--k", "1",
             "--ns", "48,72,108", "--instances", "5"])
    j = jline(p.stdout)
    check(j["dominated"] is False and 0.5 < j["slope"] < 2.5, "exponent fit")
    run(["exponent", "--k", "1", "--ns", "48,72"], expect=2)

    # verify
    p = run(["--seed", "3", "verify"])
    check("ok   rng frozen stream" in p.stdout, "verify output")

    if FAILS:
        print(f"cli_smoke: {len(FAILS)} failure(s)")
        for f in FAILS:
            print(" -", f)
        return 1
    print("cli_smoke: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
