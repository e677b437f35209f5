"""The compiled kernels must reproduce the pure-Python kernels bit for bit."""

import os
import subprocess
import sys

import pytest

from becfeedback import _kernels_py, _runner
from becfeedback.channel import derive_key

pytestmark = pytest.mark.skipif(not _runner.COMPILED, reason="compiled extension not built")

CASES = [
    ("huffman_repeat", (5, 0.2, 0.5, 100_000)),
    ("huffman_repeat", (8, 0.0, 0.9, 4)),
    ("huffman_repeat", (2, 0.0, 0.0, 100_000)),
    ("q_channel", (7, 0.5, 100_000)),
    ("q_channel", (32, 0.9, 3)),
    ("vlsf", (0, 13, 0.1, 0.5, 100_000)),
    ("vlsf", (0, 130, 0.0, 0.3, 100_000)),
    ("vlsf", (1, 9, 0.0, 0.5, 100_000)),
    ("vlsf", (1, 2, 0.0, 0.5, 100_000)),
    ("vlsf", (2, 8, 0.0, 0.5, 100_000)),
    ("vlsf", (2, 1 << 20, 0.0, 0.2, 100_000)),
    ("vlsf", (0, 16, 0.0, 0.9, 6)),
    ("sprt", (3, (0.0, 1.0, 1.0, 1.0), 1, 0.5, 100_000)),
    ("sprt", (2, (0.1, 0.5, 0.5, 1.0), 0, 0.25, 100_000)),
    ("sprt", (3, (0.0, 1.0, 1.0, 1.0), 0, 0.9, 2)),
]


@pytest.mark.parametrize("name, args", CASES)
def test_identical_accumulators(name, args):
    key = derive_key(99, hash(name) & 0xFFFF)
    compiled = getattr(_runner.kernels("compiled"), name)(key, 100, 1100, *args)
    python = getattr(_kernels_py, name)(key, 100, 1100, *args)
    assert compiled == python
    assert compiled[0] + compiled[3] == 1000


def test_chunking_is_invisible():
    key = derive_key(5, 1)
    args = (2, 16, 0.0, 0.5, 100_000)
    whole = _runner.run("vlsf", key, 3 * _runner.CHUNK + 17, args, workers=1)
    split = _runner.run("vlsf", key, 3 * _runner.CHUNK + 17, args, workers=3)
    assert whole == split


def test_pure_fallback_selected_by_environment():
    env = dict(os.environ, BECFEEDBACK_PURE="1")
    code = "from becfeedback import _runner; print(_runner.backend_name())"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _runner.kernels("fortran")
