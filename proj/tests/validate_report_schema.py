"""Run a handful of CLI subcommands and validate every emitted report
against the JSON schema."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def run(cli, args, stdin=None):
    res = subprocess.run([cli, *args], input=stdin, capture_output=True, text=True, check=False)
    if res.returncode != 0:
        raise SystemExit(f"{' '.join(args)} exited {res.returncode}:\n{res.stderr}")
    return json.loads(res.stdout)


def main():
    cli, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)

    with tempfile.TemporaryDirectory() as tmp:
        t = Path(tmp)
        real, gen = str(t / "real.actb"), str(t / "gen.actb")
        run(cli, ["toy-sample", "--out", real, "--n", "300", "--dim", "3", "--seed", "1", "--source", "real"])
        run(cli, ["toy-sample", "--out", gen, "--n", "300", "--dim", "3", "--mean", "0.5", "--seed", "2"])
        (t / "grid.txt").write_text("mean = 0.0, 1.0\n")
        (t / "p.txt").write_text("0.5\n0.5\n")
        (t / "q.txt").write_text("0.25\n0.75\n")
        (t / "probs.csv").write_text("0.9,0.1\n0.1,0.9\n")
        tune_cmd = f"{cli} toy-sample --n 300 --dim 3 --mean {{param:mean}} --seed 3 --out {{out}}"

        cases = {
            "summarize": (["summarize", real], None),
            "fid": (["fid", real, gen], None),
            "lfid": (["lfid", real, gen, "--top-k", "2"], None),
            "rank": (["rank", real], None),
            "is": (["is", str(t / "probs.csv")], None),
            "kl": (["div", "kl", str(t / "p.txt"), str(t / "q.txt")], None),
            "mmd": (["div", "mmd", real, gen], None),
            "monitor": (["monitor", "--epsilon", "0.001"], "1,100\n2,50\n3,49.9995\n"),
            "tune": (["tune", "--grid", str(t / "grid.txt"), "--cmd", tune_cmd, "--real", real], None),
            "demo-toy": (["demo-toy", "--out-dir", str(t / "demo")], None),
        }
        failed = 0
        for name, (args, stdin) in cases.items():
            report = run(cli, args, stdin)
            errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
            for e in errors:
                print(f"{name}: {'/'.join(map(str, e.path))}: {e.message}")
            failed += bool(errors)
            print(f"{'ok' if not errors else 'INVALID'}  {name}")
        sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
