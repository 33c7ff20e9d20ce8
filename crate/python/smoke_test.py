"""Smoke test for the `rva` Python extension.

Builds the extension with cargo unless RVA_LIB points at a built library,
copies it next to a temporary import path, and exercises the API.
"""

import importlib
import os
import pathlib
import shutil
import subprocess
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def built_library() -> pathlib.Path:
    env = os.environ.get("RVA_LIB")
    if env:
        return pathlib.Path(env)
    subprocess.run(
        ["cargo", "build", "--release", "-p", "rva-python"], cwd=ROOT, check=True
    )
    target = pathlib.Path(os.environ.get("CARGO_TARGET_DIR", ROOT / "target"))
    for name in ("librva.so", "librva.dylib", "rva.dll"):
        candidate = target / "release" / name
        if candidate.exists():
            return candidate
    raise SystemExit("built library not found under target/release")


def load_module():
    lib = built_library()
    tmp = pathlib.Path(tempfile.mkdtemp())
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(lib, tmp / f"rva{suffix}")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("rva")


def main() -> None:
    rva = load_module()

    text = (ROOT / "automata" / "leading-zeros-broken.rva").read_text()
    aut = rva.Automaton.parse(text)
    assert aut.states == 7, aut
    assert aut.is_weak()
    assert aut.accepts("2 * / 0")
    assert not aut.accepts("0 2 * / 0")

    minimal, classes = aut.minimize()
    assert minimal.states == 5
    assert sorted(classes) == [[0, 2], [1], [3, 4], [5], [6]], classes

    verdict = aut.check("parallel")
    assert not verdict and verdict.kind == "zero-loop-broken", verdict
    assert verdict.counterexample is not None
    assert aut.check("dim1").answer is False
    assert aut.oracle() is not None

    for encoding, mode in (("parallel", "parallel"), ("sequential", "sequential")):
        full = rva.Automaton.known("full-space", 2, 2, encoding)
        assert full.check(mode).answer, mode
        assert full.oracle() is None
    assert rva.Automaton.known("full-space", 2, 3, "sequential").states == 5
    assert rva.Automaton.known("complement-full", 3, 2, "parallel").check("complement")

    assert rva.value(aut, "1 0 * / 1") == ["7/2"]
    assert rva.value(aut, "* 1 / 0") == ["1/3"]

    round_trip = rva.Automaton.parse(aut.to_text())
    assert round_trip.to_text() == aut.to_text()

    try:
        rva.Automaton.parse("not an automaton")
    except ValueError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("parse error expected")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
