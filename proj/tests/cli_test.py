#!/usr/bin/env python3
"""End-to-end checks of the judgeattack command line.

Usage: cli_test.py <judgeattack binary> [--default-campaign]
Run from the source root so relative dataset paths resolve.
"""
import json
import os
import subprocess
import sys
import tempfile

BIN = sys.argv[1]
DATASET = os.path.abspath("data/mtbench_fixture.jsonl")
failures = []


def run(*args, env=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=env)


def check(cond, what, proc=None):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)
        if proc is not None:
            print(proc.stdout[-2000:], proc.stderr[-2000:], sep="\n")


def write_config(tmp, **fields):
    cfg = {
        "dataset_path": DATASET,
        "instance_limit": 5,
        "output_path": os.path.join(tmp, "out"),
        "threads": 1,
        "gcg": {"suffix_len": 6, "top_k": 16, "batch": 32, "max_iters": 10, "seed": 3},
    }
    cfg.update(fields)
    path = os.path.join(tmp, "config.json")
    with open(path, "w") as f:
        json.dump(cfg, f)
    return path


def basic():
    with tempfile.TemporaryDirectory() as tmp:
        cfg = write_config(tmp)
        out = os.path.join(tmp, "out")
        p = run("campaign", "-c", cfg)
        check(p.returncode == 0, "campaign with a valid config exits 0", p)
        for name in ("report.json", "report.csv", "traces.csv", "table.txt"):
            check(os.path.isfile(os.path.join(out, name)), f"campaign writes {name}")
        check(p.stdout.startswith("Method & ASR (%)"), "campaign prints the table", p)

        r = run("report", os.path.join(out, "report.json"), "-f", "table")
        with open(os.path.join(out, "table.txt")) as f:
            check(r.returncode == 0 and r.stdout == f.read(), "report re-renders the stored table", r)
        check(run("report", os.path.join(out, "report.json"), "-f", "xml").returncode == 2,
              "unknown report format exits 2")

        env = dict(os.environ, JUDGEATTACK_CONFIG=cfg)
        check(run("campaign", env=env).returncode == 0, "config path taken from JUDGEATTACK_CONFIG")

        p = run("campaign", "-c", cfg, "-s", "gcg.max_iters=1", "-s", f"output_path={tmp}/short")
        with open(os.path.join(tmp, "short", "report.json")) as f:
            report = json.load(f)
        lengths = [len(i["trace"]) for i in report["instances"] if i["trace"]]
        check(p.returncode == 0 and lengths and max(lengths) <= 2,
              f"gcg.max_iters=1 keeps every trace <= 2 entries (max {max(lengths, default=0)})", p)

    with tempfile.TemporaryDirectory() as tmp:
        cfg = write_config(tmp)
        with open(cfg) as f:
            doc = json.load(f)
        del doc["dataset_path"]
        with open(cfg, "w") as f:
            json.dump(doc, f)
        p = run("campaign", "-c", cfg)
        check(p.returncode == 2 and "dataset_path" in p.stderr, "missing dataset_path exits 2 naming the key", p)
        check(not os.path.exists(os.path.join(tmp, "out")), "config error leaves no output behind")

        cfg = write_config(tmp)
        p = run("campaign", "-c", cfg, "-s", "gcg.topk=3")
        check(p.returncode == 2 and "gcg.topk" in p.stderr, "unknown override key exits 2", p)
        check(run("campaign", "-c", os.path.join(tmp, "absent.json")).returncode == 2, "unreadable config exits 2")

        p = run("gradcheck", "-c", cfg)
        check(p.returncode == 0, "gradcheck with 100 default instances exits 0", p)
        p = run("gradcheck", "-c", cfg, "-n", "10", "-s", "judge.flat=true")
        check(p.returncode == 0 and "max relative error 0" in p.stdout, "flat judge gradcheck reports error 0", p)
        p = run("gradcheck", "-c", cfg, "-n", "5", "--inject-gradient-fault")
        check(p.returncode == 1, "corrupted gradient path exits 1", p)

        p = run("attack", "-c", cfg, "-i", "1", "-o", "jma")
        check(p.returncode == 0 and "suffix: " in p.stdout, "attack runs one instance", p)
        p = run("attack", "-c", cfg, "-i", "0")
        check(p.returncode == 1 and "no clean-A arrangement" in p.stdout, "attack reports an unorientable record", p)
        check(run("attack", "-c", cfg, "-i", "100000").returncode == 2, "attack index out of range exits 2")

    p = run("--help")
    keys = ["dataset_path", "methods", "instance_limit", "output_path", "gcg.suffix_len", "gcg.top_k", "gcg.batch",
            "gcg.max_iters", "gcg.stop_margin", "gcg.seed", "gcg.exhaustive", "lexicons.positive",
            "lexicons.negative", "judge.seed", "judge.dim", "judge.gamma", "judge.flat"]
    check(p.returncode == 0 and all(k + " = " in p.stdout for k in keys), "help lists every config key with a default", p)
    check(run().returncode == 2, "no subcommand exits 2")


# Per-method ASRs of the seeded default campaign, pinned after the first
# verified run.
PINNED_TABLE = """Method & ASR (%)
Random-Suffix & 4.0
Token-Shuffle & 63.5
Hard Prompt & 2.0
JMA & 32.5
CUA & 63.5
"""


def default_campaign():
    with tempfile.TemporaryDirectory() as tmp:
        p = run("campaign", "-c", "configs/default_campaign.json", "-s", f"output_path={tmp}")
        check(p.returncode == 0 and p.stdout == PINNED_TABLE, "default campaign reproduces the pinned ASRs", p)


if "--default-campaign" in sys.argv:
    default_campaign()
else:
    basic()
print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
