import os
import subprocess
import sys

from sdquiver.exactla import BACKEND


SNIPPET = """
from sdquiver.exactla import BACKEND
from sdquiver.dualitylab import ExperimentConfig, pairing_matrix
from sdquiver import docfmt
cfg = ExperimentConfig(seed=21, r=2, d=2, samples_V=3, samples_W=3)
print(BACKEND)
print(docfmt.dumps(docfmt.make("report", pairing_matrix(cfg)[1].to_json())))
"""


def _run(pure: bool) -> tuple[str, str]:
    env = dict(os.environ)
    env.pop("SDQUIVER_PURE", None)
    if pure:
        env["SDQUIVER_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", SNIPPET], capture_output=True, text=True, env=env, check=True).stdout
    backend, _, report = out.partition("\n")
    return backend, report


def test_backend_name():
    assert BACKEND in ("cython", "python")


def test_pure_switch_gives_identical_reports():
    b1, r1 = _run(pure=False)
    b2, r2 = _run(pure=True)
    assert b2 == "python"
    assert r1 == r2
