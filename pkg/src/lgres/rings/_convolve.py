"""Truncated convolution of sparse exponent -> rational maps.

Small products use a direct double loop. Large ones are done by Kronecker
substitution: both operands are scaled to integers, packed into one big
integer with fixed-width signed slots, multiplied once (GMP when available)
and unpacked. The packing is exact: slot width is chosen from a bound on the
largest possible output coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

try:
    import gmpy2

    def _bigmul(x: int, y: int) -> int:
        return int(gmpy2.mpz(x) * gmpy2.mpz(y))

except ImportError:  # pragma: no cover
    def _bigmul(x: int, y: int) -> int:
        return x * y

# below this many term pairs the double loop wins
_SPARSE_PAIRS = 3000


def convolve(a: dict, b: dict, limit: int | None = None) -> dict:
    """Return the product of two sparse series, keeping exponents < limit."""
    if not a or not b:
        return {}
    if limit is not None:
        mb, ma = min(b), min(a)
        a = {e: c for e, c in a.items() if e + mb < limit}
        b = {e: c for e, c in b.items() if e + ma < limit}
        if not a or not b:
            return {}
    if len(a) > len(b):
        a, b = b, a
    pairs = len(a) * len(b)
    span = (max(a) - min(a)) + (max(b) - min(b)) + 2
    if pairs <= _SPARSE_PAIRS or pairs <= 4 * span:
        return _sparse(a, b, limit)
    return _kronecker(a, b, limit)


def _sparse(a: dict, b: dict, limit: int | None) -> dict:
    out: dict = {}
    get = out.get
    bs = sorted(b.items())
    for ea, ca in a.items():
        cap = None if limit is None else limit - ea
        for eb, cb in bs:
            if cap is not None and eb >= cap:
                break
            e = ea + eb
            out[e] = get(e, 0) + ca * cb
    res = {}
    for e, c in out.items():
        if c:
            if type(c) is Fraction and c.denominator == 1:
                c = c.numerator
            res[e] = c
    return res


def _to_ints(d: dict) -> tuple[dict, int]:
    den = 1
    for c in d.values():
        if type(c) is Fraction:
            den = lcm(den, c.denominator)
    if den == 1:
        return d, 1
    return {e: int(c * den) for e, c in d.items()}, den


def _pack(vals: dict, base_exp: int, length: int, w: int) -> int:
    half = 1 << (8 * w - 1)
    slot = half.to_bytes(w, "little")
    buf = bytearray(slot * length)
    for e, v in vals.items():
        i = (e - base_exp) * w
        buf[i:i + w] = (v + half).to_bytes(w, "little")
    return int.from_bytes(buf, "little") - int.from_bytes(slot * length, "little")


def _unpack(r: int, length: int, keep: int, w: int) -> tuple[np.ndarray, list] | list:
    half = 1 << (8 * w - 1)
    slot = half.to_bytes(w, "little")
    r += int.from_bytes(slot * length, "little")
    buf = r.to_bytes(length * w, "little")[: keep * w]
    if w <= 8:
        raw = np.frombuffer(buf, dtype=np.uint8).reshape(keep, w)
        padded = np.zeros((keep, 8), dtype=np.uint8)
        padded[:, :w] = raw
        u = padded.view("<u8").ravel()
        signed = (u - np.uint64(half)).view(np.int64)
        idx = np.nonzero(signed)[0]
        return list(zip(idx.tolist(), signed[idx].tolist()))
    out = []
    for j in range(keep):
        v = int.from_bytes(buf[j * w:(j + 1) * w], "little") - half
        if v:
            out.append((j, v))
    return out


def _kronecker(a: dict, b: dict, limit: int | None) -> dict:
    ia, da = _to_ints(a)
    ib, db = _to_ints(b)
    a0, b0 = min(ia), min(ib)
    la = max(ia) - a0 + 1
    lb = max(ib) - b0 + 1
    length = la + lb - 1
    keep = length if limit is None else min(length, limit - a0 - b0)
    bound = min(len(ia), len(ib)) * max(abs(v) for v in ia.values()) * max(abs(v) for v in ib.values())
    w = (bound.bit_length() + 2 + 7) // 8
    x = _pack(ia, a0, la, w)
    y = _pack(ib, b0, lb, w)
    prod = _bigmul(x, y)
    den = da * db
    out = {}
    e0 = a0 + b0
    for j, v in _unpack(prod, length, keep, w):
        if den == 1:
            out[e0 + j] = v
        else:
            c = Fraction(v, den)
            out[e0 + j] = c.numerator if c.denominator == 1 else c
    return out
