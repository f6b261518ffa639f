"""Smoke test for the polyint_py extension.

Builds the extension with cargo when it is not importable, then checks the
documented command-line examples through the Python API.
"""

import importlib
import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("polyint_py")
    except ImportError:
        pass
    subprocess.run(["cargo", "build", "-q", "-p", "polyint-python"], cwd=ROOT, check=True)
    lib = ROOT / "target" / "debug" / "libpolyint_py.so"
    tmp = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "polyint_py.so")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("polyint_py")


def main():
    p = load()

    status, text = p.integrate("log(x)/(x-1)")
    assert status == "Integrated", status
    assert "dilog_term(d=1, h=x, k=1)" in text, text

    assert p.derive("log(x)^2") == "2*log(x)/x"

    status, _ = p.integrate("exp(x^2)")
    assert status == "NoIntegralFound", status

    status, payload = p.integrate("1/(t^2+1)", var="t", json=True)
    doc = json.loads(payload)
    assert doc["schema"] == "polyint-1" and doc["new_constants"], doc

    assert p.verify("log(1-x)/x", "-Li(2, x)")
    assert not p.verify("log(1-x)/x", "Li(2, x)")

    check = json.loads(p.tensor_check("x^2/(x+3)"))
    assert check["symmetric"] and all(check["conditions"]), check

    try:
        p.integrate("log(")
    except ValueError as e:
        assert "offset 4" in str(e)
    else:
        raise AssertionError("parse error not raised")

    assert p.run(["integrate", "x", "--nope"])[2] == 2
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
