"""Runs the driftgreen binary and checks outputs against the checked-in schemas."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

BIN = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])
failures = []


def schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


def run(*args):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    return p.returncode, p.stdout


def check(label, cond):
    print(("ok   " if cond else "FAIL ") + label)
    if not cond:
        failures.append(label)


def validate(label, doc, name):
    try:
        jsonschema.validate(doc, schema(name))
        check(label, True)
    except jsonschema.ValidationError as e:
        print(e)
        check(label, False)


CASES = [
    ("fixation", ["fixation", "--alpha", "0", "--psi", "1", "--x", "0.25"], 0),
    ("fixation", ["fixation", "--alpha", "0.5", "--psi", "1,-2", "--grid", "0.1:0.9:5"], 0),
    ("fixation", ["fixation", "--alpha", "0.01", "--grid", "0.001:0.01:3", "--over", "alpha", "--x", "0.3"], 0),
    ("times", ["times", "--alpha", "1", "--psi", "1", "--x", "0.2", "--from-zero"], 0),
    ("times", ["times", "--alpha", "1", "--grid", "0.1:0.9:3"], 0),
    ("green", ["green", "--alpha", "0.3", "--monomial", "k=1", "--x", "0.3", "--y", "0.6"], 0),
    ("green", ["green", "--alpha", "0.3", "--x", "0.3", "--y", "0.2", "--conditioning", "down"], 0),
    ("green", ["green", "--alpha", "0.3", "--x", "0.3", "--grid", "0.1:0.9:4", "--over", "y", "--conditioning", "up"], 0),
    ("spectrum", ["spectrum", "--alpha", "0", "--grid", "0.1:0.9:9"], 0),
    ("spectrum", ["spectrum", "--alpha", "0.2", "--one-minus", "k=1", "--x", "0.4", "--sigma2", "0,1,-1"], 0),
    ("game", ["game", "--payoff", "1,4,2,3", "--ploidy", "haploid", "--rule", "--x", "0"], 0),
    ("game", ["game", "--payoff", "1,4,2,3", "--ploidy", "dominant"], 0),
    ("game", ["game", "--dominance", "1/4", "--rule", "--x", "0.1"], 0),
    ("mc", ["mc", "--alpha", "0.1", "--x", "0.3", "--paths", "300", "--seed", "7"], 0),
    ("report", ["report", "--diploid", "dominant"], 0),
    ("report", ["report", "--diploid", "recessive"], 0),
    ("report", ["report", "--monomial", "k=2", "--x", "0.3"], 0),
    ("report", ["report", "--psi", "1,-1", "--sigma2", "0,1,-1", "--x", "0.3"], 0),
    ("error", ["fixation", "--x", "1.5"], 2),
    ("error", ["fixation", "--grid", "0:1:0"], 2),
    ("error", ["fixation", "--no-such-flag"], 2),
    ("error", ["report", "--psi", "1", "--sigma2", "0,0,1", "--x", "0.5"], 3),
    ("error", ["green", "--alpha", "3", "--psi", "0,0,0,5", "--x", "0.5", "--y", "0.4", "--sigma2", "0,1,-1",
               "--max-subdivisions", "1", "--rel-tol", "1e-15", "--abs-tol", "1e-300"], 3),
    ("error", ["mc", "--alpha", "50", "--x", "0.9", "--paths", "20"], 3),
]

for name, args, want in CASES:
    code, out = run(*args)
    label = " ".join(args)
    check(f"exit {want}: {label}", code == want)
    try:
        doc = json.loads(out)
    except json.JSONDecodeError:
        check(f"json stdout: {label}", False)
        continue
    validate(f"schema: {label}", doc, "error" if "error" in doc else name)

# Spot values quoted in the CLI contract.
_, out = run("fixation", "--alpha", "0", "--psi", "1", "--x", "0.25")
check("neutral p_up = x", abs(json.loads(out)["p_up"] - 0.25) < 1e-12)
_, out = run("game", "--payoff", "1,4,2,3", "--ploidy", "haploid", "--rule", "--x", "0")
g = json.loads(out)
check("game beta/gamma", g["beta"] == 1 and g["gamma"] == 2)
check("game verdict", g["verdict"] == "FAVORED" and abs(g["margin"] - 1 / 3) < 1e-12)
_, out = run("report", "--diploid", "dominant")
check("dominant fixation slope", json.loads(out)["fixation"] == {"beta": "2/3", "gamma": "-2/5"})

# Divergence and NonConvergence are told apart in the error class.
_, out = run("report", "--psi", "1", "--sigma2", "0,0,1", "--x", "0.5")
check("non-integrable case named Divergence", json.loads(out)["error"]["class"] == "Divergence")
_, out = run("green", "--alpha", "3", "--psi", "0,0,0,5", "--x", "0.5", "--y", "0.4", "--sigma2", "0,1,-1",
             "--max-subdivisions", "1", "--rel-tol", "1e-15", "--abs-tol", "1e-300")
check("exhausted budget named NonConvergence", json.loads(out)["error"]["class"] == "NonConvergence")

with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    # CSV goes to --out; stdout keeps a short JSON pointer.
    csv = tmp / "s.csv"
    code, out = run("spectrum", "--alpha", "0", "--grid", "0.1:0.9:9", "--format", "csv", "--out", str(csv))
    check("csv sweep exit 0", code == 0)
    lines = csv.read_text().splitlines()
    check("csv header", lines[0] == "x,f,first_order,difference")
    ok = all(abs(float(r.split(",")[1]) - 1 / float(r.split(",")[0])) < 1e-8 for r in lines[1:])
    check("neutral spectrum column equals 1/x", ok and len(lines) == 10)
    code, _ = run("fixation", "--x", "0.2", "--format", "csv")
    check("csv without grid is a usage error", code == 2)

    # Job files: flags override file values; the resolved job round-trips.
    job = tmp / "job.json"
    job.write_text(json.dumps({"model": {"alpha": 0.5, "psi": [1, "-2"]}, "task": {"command": "fixation", "x": 0.3}}))
    validate("jobspec schema accepts example", json.loads(job.read_text()), "jobspec")
    code, out = run("fixation", "--job", str(job), "--x", "0.4", "--emit-job")
    resolved = json.loads(out)
    validate("emitted job validates", resolved, "jobspec")
    check("flag overrides file", resolved["task"]["x"] == 0.4 and resolved["model"]["alpha"] == 0.5)
    job2 = tmp / "job2.json"
    job2.write_text(json.dumps(resolved))
    _, out2 = run("fixation", "--job", str(job2), "--emit-job")
    check("emitted job round-trips", json.loads(out2) == resolved)
    bad = tmp / "bad.json"
    bad.write_text(json.dumps({"model": {"alpha": 0.5, "colour": 1}}))
    code, out = run("fixation", "--job", str(bad), "--x", "0.3")
    check("unknown job key rejected", code == 2 and json.loads(out)["error"]["class"] == "UsageError")
    code, _ = run("times", "--job", str(job))
    check("job command mismatch rejected", code == 2)

    # mc with a seed is reproducible run to run and across worker counts.
    a = run("mc", "--alpha", "0.1", "--x", "0.3", "--paths", "2000", "--seed", "11", "--workers", "1")[1]
    b = run("mc", "--alpha", "0.1", "--x", "0.3", "--paths", "2000", "--seed", "11", "--workers", "1")[1]
    c = run("mc", "--alpha", "0.1", "--x", "0.3", "--paths", "2000", "--seed", "11", "--workers", "4")[1]
    check("mc reproducible", a == b)
    check("mc independent of workers", json.loads(a)["p_fix"] == json.loads(c)["p_fix"]
          and json.loads(a)["mean_T"] == json.loads(c)["mean_T"])

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
