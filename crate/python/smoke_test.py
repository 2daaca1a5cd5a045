"""Smoke test for the Python bindings.

Build the extension and put it next to this script first:

    cargo build -p tenhundred-python --release --features extension-module
    cp target/release/libtenhundred.so python/tenhundred.so
    python3 python/smoke_test.py
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import tenhundred  # noqa: E402


def main():
    e = tenhundred.Engine()
    assert len(e) == 998
    assert e.closure_size() == 4240
    assert "talker" in e and "xylophone" not in e
    assert e.is_listed("talk") and not e.is_listed("talker")

    rules = {d.rule for d in e.analyze("names")}
    assert rules == {2, 4}, rules
    assert any(d.rule == 3 and d.root == "talk" for d in e.analyze("talker"))
    assert e.check_token("mad").verdict == "extra"
    assert e.check_token("xylophone").verdict == "rejected"
    assert [d.surface for d in e.expand("talk")][:1] == ["talk"]
    try:
        e.expand("zzz")
    except KeyError:
        pass
    else:
        raise AssertionError("expand of an unlisted word should raise")

    text = "The space-boat is mad. Don't touch the xylophone!"
    notes = e.check(text)
    assert [(a.surface, a.verdict) for a in notes] == [("mad", "extra"), ("xylophone", "rejected")], notes
    for a in notes:
        assert text.encode()[a.start:a.end].decode().lower() == a.surface
    assert [t.surface for t in e.tokenize("Don't")] == ["do", "not"]

    h = e.histogram("the things the talker names")
    assert h["forms"]["total"] == 4 and h["occurrences"]["total"] == 5
    assert e.rank_frequency("talk talked talking", lemmatized=True) == [("talk", 3)]

    rng = random.Random(7)
    counts = [1 + int(rng.paretovariate(1.5)) for _ in range(5000)]
    report = tenhundred.fit(counts, xmin=1)
    assert 1.5 < report.alpha < 3.5, report
    assert abs(tenhundred.hurwitz_zeta(2.0, 1.0) - 3.141592653589793 ** 2 / 6) < 1e-10
    try:
        tenhundred.fit([])
    except ValueError:
        pass
    else:
        raise AssertionError("empty sample should raise")
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
