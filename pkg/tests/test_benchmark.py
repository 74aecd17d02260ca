import json
import os
import subprocess
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def test_benchmark_smoke():
    out = subprocess.run([sys.executable, os.path.join(ROOT, "benchmarks", "bench_core.py"),
                          "--n", "12", "--grid", "8", "--repeat", "1", "--json"],
                         capture_output=True, text=True, check=True).stdout
    rows = json.loads(out)["rows"]
    assert {r["kernel"] for r in rows} == {"hessenberg", "shifted QR", "log|p_n| grid", "pairing"}
    assert all(r["python"] > 0 for r in rows)


def test_fallback_selected_by_environment():
    env = dict(os.environ, CIRCLAW_PURE_PYTHON="1")
    code = "import circlaw.backend as b; print(b.NAME)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.strip()
    assert out == "python"
