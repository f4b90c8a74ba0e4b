"""End-to-end checks of the ccc binary: exit codes, determinism, dump round trips,
and validation of every emitted document against schemas/.

usage: cli_end_to_end.py <ccc binary> <schemas dir> <scratch dir>
"""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

CCC, SCHEMAS, SCRATCH = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
SCRATCH.mkdir(parents=True, exist_ok=True)
failures = []


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def validate(doc, name, what):
    try:
        jsonschema.validate(doc, schema(name))
    except jsonschema.ValidationError as e:
        failures.append(f"{what}: {name} schema: {e.message}")


def run(*args):
    p = subprocess.run([CCC, *args], capture_output=True, text=True)
    return p.returncode, p.stdout


def check(cond, what):
    if not cond:
        failures.append(what)


def report(expected_rc, *args):
    rc, out = run(*args)
    check(rc == expected_rc, f"{' '.join(args)}: exit {rc}, expected {expected_rc}")
    doc = json.loads(out)
    validate(doc, "report", " ".join(args))
    return doc


def fixture(name, seed=0):
    rc, out = run("fixture", name, "--seed", str(seed))
    check(rc == 0, f"fixture {name}: exit {rc}")
    doc = json.loads(out)
    validate(doc, doc["type"], f"fixture {name}")
    path = SCRATCH / (name.replace("/", "_").replace("*", "x") + f"_{seed}.json")
    path.write_text(out)
    return str(path)


# every fixture document matches its schema
rc, names = run("fixture", "list")
for name in names.split():
    if "<" not in name:
        fixture(name)
rand = fixture("random/P2/2", seed=11)

o2 = fixture("line/O(2)/P1")
o11 = fixture("line/O(1,1)/P1xP1")
koszul = fixture("complex/koszul/P1")
ml = fixture("complex/M_L")
mixed = fixture("line/mixed/F1")

# exit-code contract
doc = report(0, "theta", "table", o2)
check([r["betti"] for r in doc["result"]["table"]["rows"]] == [[1, 0]] * 3, "O(2)/P1 table")
report(0, "certify", "nef", o11)
doc = report(1, "certify", "bundle", koszul)
check(doc["verdict"] is False and doc["witnesses"], "koszul witnesses")
for w in doc["witnesses"]:
    validate(w, "witness", "koszul witness")
witness = SCRATCH / "witness.json"
witness.write_text(json.dumps(doc["witnesses"][0]))
report(1, "certify", "bundle", koszul, "--replay", str(witness))
report(0, "certify", "bundle", o2, "--replay", str(witness))
report(0, "certify", "bundle", ml)
report(0, "certify", "convex", o2)
report(0, "fan", "validate", o2)
report(2, "certify", "bundle", str(SCRATCH / "absent.json"))
report(2, "certify", "sideways", o2)
bad = SCRATCH / "bad_fan.json"
bad.write_text('{"dim": 1, "rays": [[1], [-1]], "cones": [[0], [1]], "colour": 1}')
doc = report(2, "fan", "validate", str(bad))
check(doc["error"]["class"] == "schema" and doc["error"]["pointer"] == "/colour", "schema error pointer")
rc, _ = run("certify", "bundle", o2, "--no-such-flag")
check(rc == 2, "unknown flag exit code")

# job configuration files
job = {"command": ["certify", "nef"], "inputs": [rand], "seed": 11}
validate(job, "job-config", "job")
(SCRATCH / "job.json").write_text(json.dumps(job))
report_a = SCRATCH / "a.json"
report_b = SCRATCH / "b.json"
rc_a, _ = run("--config", str(SCRATCH / "job.json"), "-o", str(report_a))
rc_b, _ = run("--config", str(SCRATCH / "job.json"), "-o", str(report_b))
check(rc_a == rc_b and rc_a in (0, 1), "config runs")
check(report_a.read_bytes() == report_b.read_bytes(), "report determinism under a fixed seed")
validate(json.loads(report_a.read_text()), "report", "config report")
(SCRATCH / "bad_job.json").write_text(json.dumps({**job, "verbose": True}))
rc, _ = run("--config", str(SCRATCH / "bad_job.json"))
check(rc == 2, "unknown config field")
check(run("fixture", "random/P2/2", "--seed", "11")[1] == Path(rand).read_text(), "fixture determinism")

# dumps round-trip through parse_input
for source, args in [(o2, ["mo"]), (fixture("line/O(1)/P2"), ["mo"]), (ml, ["mo"]), (rand, ["mo", "--convention", "costalk"])]:
    dump = SCRATCH / "dump.json"
    doc = report(0, *args, source, "--dump", str(dump))
    cells = json.loads(dump.read_text())
    validate(cells, "function", f"dump of {source}")
    fn = SCRATCH / "fn.json"
    fn.write_text(json.dumps(doc["result"]["function"]))
    a = report(0, "euler", "integrate", str(fn))["result"]["value"]
    b = report(0, "euler", "integrate", str(dump))["result"]["value"]
    check(a == b, f"dump integral of {source}")
mu_dump = SCRATCH / "mu.json"
report(0, "theta", "microlocal", mixed, "--point=0,1", "--dump", str(mu_dump))
validate(json.loads(mu_dump.read_text()), "mu-sheaf", "mu dump")

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli end-to-end: ok")
