"""Desk-scale benchmark: per-operation timings, group-op counts and sizes.

Every online operation is timed ``iterations`` times per backend (setup,
which performs t fixed-base multiplications, runs fewer times).  Group
operation counts come from one instrumented run on a ``CountingGroup``; the
convention is the one documented there (multi_add of m points = m - 1
additions).  When more than one backend is requested the report also gives
the python/ext speed ratio for each operation.
"""

from __future__ import annotations

import os
import statistics
import time

from . import authority, schemes, users
from .group import available_backends, get_group, op_counter_wrap
from .wire import size_report

CV_WARN = 0.25
MESSAGE = b"\x42" * 32


def resolve_backends(name: str | None) -> list[str]:
    have = available_backends()
    if name in (None, "auto"):
        return have[:1]
    if name == "both":
        return have
    if name not in have:
        raise ValueError(f"backend {name!r} is not available (have {have})")
    return [name]


def _time(fn, inputs):
    out = []
    for x in inputs:
        t0 = time.perf_counter_ns()
        fn(x)
        out.append((time.perf_counter_ns() - t0) / 1000.0)
    return out


class _Fixture:
    """Keys and inputs for one backend, built outside the timed loops."""

    def __init__(self, params, rng):
        self.params = params
        self.msk, self.mpk = authority.setup(params, rng)
        self.rng = rng
        a = authority.extract("alice@bench", self.msk, self.mpk, rng)
        self.alice = users.idb_credential("alice@bench", a, self.mpk)
        self.secret = users.user_setup(params, rng)
        self.partial = authority.part_key_gen("bob@bench", self.secret.U,
                                              self.msk, self.mpk, rng)
        self.bob = users.user_key_gen("bob@bench", self.secret, self.partial, self.mpk)

    def rebind(self, params):
        """Same keys, viewed through ``params`` (used for op counting)."""
        f = object.__new__(_Fixture)
        f.params = params
        f.msk = authority.MasterSecretKey(params, self.msk.v)
        f.mpk = self.mpk.with_params(params)
        f.rng = self.rng
        f.alice = self.alice.with_params(params)
        f.bob = self.bob.with_params(params)
        f.secret = self.secret
        f.partial = self.partial
        return f


def _operations(f):
    """name -> (callable(arg), make_arg(i)) for one fixture."""
    mpk, rng = f.mpk, f.rng
    ct = schemes.encrypt(MESSAGE, "bob@bench", f.bob.Q, mpk, rng)
    sig = schemes.sign(MESSAGE, f.alice, rng)
    peer = schemes.kex_message(f.bob, schemes.kex_init(f.params, rng))
    return {
        "extract": (lambda _: authority.extract("carol@bench", f.msk, mpk, rng), None),
        "part_key_gen": (lambda _: authority.part_key_gen(
            "bob@bench", f.secret.U, f.msk, mpk, rng), None),
        "user_key_gen": (lambda _: users.user_key_gen(
            "bob@bench", f.secret, f.partial, mpk), None),
        "encrypt": (lambda _: schemes.encrypt(MESSAGE, "bob@bench", f.bob.Q, mpk, rng), None),
        "decrypt": (lambda _: schemes.decrypt(f.bob, ct), None),
        "sign": (lambda _: schemes.sign(MESSAGE, f.alice, rng), None),
        "verify": (lambda _: schemes.verify(MESSAGE, "alice@bench", f.alice.Q, mpk, sig), None),
        "kex_init": (lambda _: schemes.kex_init(f.params, rng), None),
        "kex_finalize": (lambda eph: schemes.kex_finalize(
            f.alice, eph, "bob@bench", peer, mpk, "initiator"),
            lambda: schemes.kex_init(f.params, rng)),
    }


_BYTES = {
    "setup": "mpk",
    "extract": "partial_key",
    "part_key_gen": "partial_key",
    "user_key_gen": "credential_core",
    "encrypt": "ct_overhead",
    "decrypt": "ct_overhead",
    "sign": "signature",
    "verify": "signature",
    "kex_init": "kexmsg",
    "kex_finalize": "kexmsg",
}


def count_ops(params, rng=os.urandom) -> dict:
    """{op: (muls, adds)} from one instrumented run of each operation."""
    fixture = _Fixture(params, rng)
    counter = op_counter_wrap(params.group)
    counted = fixture.rebind(params.with_group(counter))
    out = {}
    for name, (fn, make) in _operations(counted).items():
        arg = make() if make else None
        counter.reset()
        fn(arg)
        out[name] = (counter.counts.muls, counter.counts.add)
    counter.reset()
    authority.setup(counted.params, rng)
    out["setup"] = (counter.counts.muls, counter.counts.add)
    return out


def _row(backend, op, samples, muls, adds, nbytes):
    mean = statistics.fmean(samples)
    stdev = statistics.stdev(samples) if len(samples) > 1 else 0.0
    return {
        "backend": backend, "op": op,
        "median_us": statistics.median(samples), "mean_us": mean,
        "cv": stdev / mean if mean else 0.0,
        "muls": muls, "adds": adds, "bytes": nbytes, "n": len(samples),
    }


def run_bench(iterations: int = 100, *, t: int = authority.DEFAULT_T,
              k: int = authority.DEFAULT_K, n: int = authority.DEFAULT_N,
              backends=None, rng=os.urandom) -> dict:
    if iterations < 100:
        raise ValueError("iterations must be >= 100")
    backends = list(backends or resolve_backends("auto"))
    rows, warnings, summary = [], [], {}
    for backend in backends:
        params = authority.SystemParams(get_group("production", backend=backend), t, k, n)
        sizes = size_report(params)
        counts = count_ops(params, rng)
        fixture = _Fixture(params, rng)
        timings = {}
        setup_iters = max(3, iterations // 50)
        timings["setup"] = _time(lambda _: authority.setup(params, rng), range(setup_iters))
        for name, (fn, make) in _operations(fixture).items():
            inputs = [make() for _ in range(iterations)] if make else range(iterations)
            timings[name] = _time(fn, inputs)
        for op, samples in timings.items():
            muls, adds = counts[op]
            row = _row(backend, op, samples, muls, adds, sizes[_BYTES[op]])
            rows.append(row)
            if row["cv"] > CV_WARN:
                warnings.append(f"{backend}/{op}: coefficient of variation "
                                f"{row['cv']:.0%} > {CV_WARN:.0%}")
        enc_dec = [a + b for a, b in zip(timings["encrypt"], timings["decrypt"])]
        sig_ver = [a + b for a, b in zip(timings["sign"], timings["verify"])]
        summary[backend] = {
            "enc_dec_median_us": statistics.median(enc_dec),
            "sign_verify_median_us": statistics.median(sig_ver),
        }
    if len(backends) > 1:
        base = backends[0]
        med = {(r["backend"], r["op"]): r["median_us"] for r in rows}
        summary["speedup"] = {
            other: {op: med[(other, op)] / med[(base, op)]
                    for (b, op) in med if b == base}
            for other in backends[1:]
        }
    return {
        "params": {"t": t, "k": k, "n": n, "iterations": iterations},
        "counting": "muls = scalar multiplications (fixed-base included); "
                    "adds = point additions, multi_add of m points = m-1",
        "rows": rows, "summary": summary, "warnings": warnings,
    }


def format_report(report: dict) -> str:
    head = f"{'backend':<10}{'op':<14}{'median_us':>11}{'mean_us':>11}{'cv':>7}{'muls':>6}{'adds':>6}{'bytes':>8}"
    lines = [head, "-" * len(head)]
    for r in report["rows"]:
        lines.append(f"{r['backend']:<10}{r['op']:<14}{r['median_us']:>11.1f}"
                     f"{r['mean_us']:>11.1f}{r['cv']:>7.0%}{r['muls']:>6}"
                     f"{r['adds']:>6}{r['bytes']:>8}")
    lines.append("")
    for backend, s in report["summary"].items():
        if backend == "speedup":
            for other, ratios in s.items():
                worst = max(ratios.values())
                lines.append(f"{other} / {report['rows'][0]['backend']} median ratio: "
                             f"up to {worst:.1f}x")
            continue
        lines.append(f"{backend}: enc+dec median {s['enc_dec_median_us']:.1f} us, "
                     f"sign+verify median {s['sign_verify_median_us']:.1f} us")
    lines.append(f"counting: {report['counting']}")
    return "\n".join(lines)
