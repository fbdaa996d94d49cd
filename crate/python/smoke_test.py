"""Smoke test for the ticket_py extension.

Build first with `cargo build -p ticket-py --release`; the test copies the
shared library next to a temporary module path when it is not installed.
"""

import importlib
import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("ticket_py")
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libticket_py.so"
        if lib.exists():
            tmp = Path(tempfile.mkdtemp())
            shutil.copy(lib, tmp / "ticket_py.so")
            sys.path.insert(0, str(tmp))
            return importlib.import_module("ticket_py")
    raise RuntimeError("ticket_py not built; run cargo build -p ticket-py --release")


tp = load()


def test_parse_normalizes():
    assert tp.parse("a -> (b -> a)") == "a->b->a"


def test_decide_w_type():
    d = json.loads(tp.decide("(p->p->c)->p->c", engine="bounded"))
    assert d["verdict"] == "Inhabited"
    assert d["witness_lambda"] is not None
    cert = json.dumps(d["witness_combinator"])
    assert tp.check(cert, "(p->p->c)->p->c")
    assert not tp.check(cert, "p->p")


def test_decide_rejects_k():
    d = json.loads(tp.decide("a->b->a", engine="shadow"))
    assert d["verdict"] == "Empty"


def test_decide_is_deterministic():
    assert tp.decide("(a->b)->(c->a)->c->b") == tp.decide("(a->b)->(c->a)->c->b")


def test_inhabitants():
    assert len(tp.inhabitants("(a->a)->a->a", 9)) == 4
    assert tp.inhabitants("a", 9) == []


def test_bad_input():
    for call in (lambda: tp.parse("a->"), lambda: tp.decide("a", engine="fast")):
        try:
            call()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")


if __name__ == "__main__":
    tests = [(k, v) for k, v in sorted(globals().items()) if k.startswith("test_")]
    for name, fn in tests:
        fn()
        print(f"{name}: ok")
    print(f"{len(tests)} passed")
