"""Dense multivariate integer polynomial products by Kronecker substitution.

Arrays are numpy object arrays of non-negative Python ints.  Both operands
are packed into one big integer with a slot per output monomial, multiplied
once, and unpacked.  Slots are whole 64-bit limbs so packing and unpacking
stay inside numpy.
"""

from __future__ import annotations

import numpy as np

try:  # GMP multiplication wins by a wide margin on multi-megabit operands
    import gmpy2
except ImportError:  # pragma: no cover
    gmpy2 = None

_MASK64 = (1 << 64) - 1
_GMP_THRESHOLD_BITS = 200_000


def _max_entry(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(a.max())


def _pack(a: np.ndarray, full: tuple, limbs: int) -> bytes:
    z = np.zeros(full, dtype=object)
    z[tuple(slice(0, s) for s in a.shape)] = a
    flat = z.reshape(-1)
    words = np.empty((flat.size, limbs), dtype=np.uint64)
    for k in range(limbs):
        words[:, k] = ((flat >> (64 * k)) & _MASK64).astype(np.uint64)
    return words.tobytes()


def _unpack(raw: bytes, full: tuple, limbs: int) -> np.ndarray:
    total = int(np.prod(full))
    need = total * limbs * 8
    if len(raw) < need:
        raw = raw + bytes(need - len(raw))
    words = np.frombuffer(raw[:need], dtype="<u8").reshape(total, limbs)
    out = words[:, 0].astype(object)
    for k in range(1, limbs):
        out = out + (words[:, k].astype(object) << (64 * k))
    return out.reshape(full)


def polymul(a: np.ndarray, b: np.ndarray, crop: tuple | None = None) -> np.ndarray:
    """Product of two dense polynomials given as coefficient arrays.

    ``crop`` keeps only the leading corner of the full product (truncation).
    """
    if a.ndim != b.ndim:
        raise ValueError("operands must have the same number of variables")
    full = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    out_shape = full if crop is None else tuple(min(c, f) for c, f in zip(crop, full))
    ma, mb = _max_entry(a), _max_entry(b)
    if ma == 0 or mb == 0:
        return np.zeros(out_shape, dtype=object)
    bits = ma.bit_length() + mb.bit_length() + min(a.size, b.size).bit_length() + 1
    limbs = -(-bits // 64)
    ia = int.from_bytes(_pack(a, full, limbs), "little")
    ib = int.from_bytes(_pack(b, full, limbs), "little")
    if gmpy2 is not None and ia.bit_length() > _GMP_THRESHOLD_BITS:
        prod = int(gmpy2.mpz(ia) * gmpy2.mpz(ib))
    else:
        prod = ia * ib
    total_bytes = int(np.prod(full)) * limbs * 8
    res = _unpack(prod.to_bytes(total_bytes, "little"), full, limbs)
    return res[tuple(slice(0, s) for s in out_shape)]


def naive_polymul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Schoolbook product; reference for tests only."""
    full = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    out = np.zeros(full, dtype=object)
    for ia in np.ndindex(*a.shape):
        va = a[ia]
        if va == 0:
            continue
        for ib in np.ndindex(*b.shape):
            out[tuple(i + j for i, j in zip(ia, ib))] += va * b[ib]
    return out
