"""Run each CLI subcommand once and validate its JSON output and manifest."""
import json
import os
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])

RUNS = [
    ("manifest", ["generate", "--model", "lrp", "--window", "501", "--seed", "1"], "g.edges"),
    ("generate", ["generate", "--model", "boolean-lattice", "--gamma", "0.5", "--box", "5,5", "--format", "json"],
     "lattice.json"),
    ("cuts", ["cuts", "--graph", "{tmp}/g.edges"], "cuts.json"),
    ("simulate", ["simulate", "--model", "lrp", "--mode", "annealed", "--lambda", "1", "--window", "201",
                  "--horizon", "20", "--replicas", "100"], "sim.json"),
    ("sweep", ["sweep", "--model", "path", "--mode", "annealed", "--lambda-grid", "0.5,1,2", "--window", "101",
               "--horizon", "20", "--replicas", "100"], "sweep.json"),
    ("sweep", ["sweep", "--model", "path", "--mode", "annealed", "--lambda-grid", "1", "--window", "101",
               "--replicas", "100", "--bracket", "0.5,4", "--precision", "1"], "sweep_bracket.json"),
    ("rwre", ["rwre", "--graph", "{tmp}/g.edges", "--lambda", "0.05", "--replicas", "200"], "rwre.json"),
    ("star", ["star", "--task", "persist", "--leaves", "50", "--replicas", "100"], "star.json"),
    ("star", ["star", "--task", "root", "--leaves", "50", "--replicas", "100"], "star_root.json"),
    ("star", ["star", "--task", "leaf", "--leaves", "50", "--replicas", "100"], "star_leaf.json"),
    ("star", ["star", "--task", "scaling", "--k-grid", "5,10", "--horizon", "100", "--replicas", "50"],
     "star_scaling.json"),
    ("renorm", ["renorm", "--task", "exponent", "--gamma", "0.75"], "exp.json"),
    ("renorm", ["renorm", "--task", "field", "--gamma", "0.75", "--L", "100", "--window", "40"], "field.json"),
    ("renorm", ["renorm", "--task", "survival", "--gamma", "0.25", "--L", "100", "--box", "10",
                "--horizon", "10", "--replicas", "20"], "surv.json"),
    ("check-conditions", ["check-conditions", "--model", "lrp", "--delta", "2.5"], "cond.json"),
    ("check-conditions", ["check-conditions", "--model", "wdrcm", "--gamma", "0.4"], "cond_wdrcm.json"),
]


def load(name):
    return json.loads((schema_dir / f"{name}.schema.json").read_text())


def main():
    manifest = load("manifest")
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        env = dict(os.environ, SOURCE_DATE_EPOCH="1700000000")
        for name, args, out in RUNS:
            path = pathlib.Path(tmp) / out
            cmd = [cli] + [a.format(tmp=tmp) for a in args] + ["--out", str(path)]
            proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"FAIL {out}: exit {proc.returncode}: {proc.stderr.strip()}")
                failures += 1
                continue
            try:
                if name != "manifest":
                    jsonschema.validate(json.loads(path.read_text()), load(name))
                jsonschema.validate(json.loads(pathlib.Path(f"{path}.manifest.json").read_text()), manifest)
                print(f"ok   {out}")
            except jsonschema.ValidationError as e:
                print(f"FAIL {out}: {e.message} at {list(e.absolute_path)}")
                failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
