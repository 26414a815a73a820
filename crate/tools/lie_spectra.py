#!/usr/bin/env python3
"""Element-order spectra of PSL(n,q), PSU(n,q) and PSp(2n,q).

An element of the quasisimple group factors as x = s*u with s semisimple and
u unipotent in C(s). Semisimple classes are enumerated as multisets of
eigenvalue orbits (Frobenius orbits for GL, twisted orbits for GU, orbits
closed under inversion for Sp); eigenvalues are represented as exponents of
a generator of the multiplicative group of a large common extension field.
The projective order of x is lcm(k_s, ord(u)) where k_s is the least k with
all eigenvalues of s^k equal, and ord(u) = p^ceil(log_p b) for a Jordan block
size b bounded by the multiplicity data of the centralizer.
"""
import sys
from functools import lru_cache
from math import gcd
from sympy import factorint


def lcm(a, b):
    return a * b // gcd(a, b)


def lcm_range(n):
    out = 1
    for i in range(1, n + 1):
        out = lcm(out, i)
    return out


def prime_of(q):
    f = factorint(q)
    assert len(f) == 1, q
    return next(iter(f))


def unipotent_orders(p, max_block):
    out = set()
    for b in range(1, max_block + 1):
        o = 1
        while o < b:
            o *= p
        out.add(o)
    return out


def proj_order(exps, N):
    base = exps[0]
    k = 1
    for e in exps[1:]:
        d = (e - base) % N
        k = lcm(k, N // gcd(N, d))
    return k


def orbits(q, twist, max_deg, N):
    """Frobenius orbits of eigenvalues with degree <= max_deg.

    Returns a list of (degree, tuple_of_exponents)."""
    step = -q if twist else q
    seen = set()
    out = []
    for d in range(1, max_deg + 1):
        M = abs(step ** d - 1)
        stride = N // M
        assert N % M == 0
        for j in range(M):
            e = j * stride
            if e in seen:
                continue
            orb = [e]
            x = (e * step) % N
            while x != e:
                orb.append(x)
                x = (x * step) % N
            if len(orb) != d:
                continue
            for y in orb:
                seen.add(y)
            out.append((d, tuple(orb)))
    return out


def multisets(blocks, total):
    """Yield lists of (block_index, multiplicity) with sum of dims = total.

    `blocks` must be sorted by dimension, largest first."""
    dims = [b[0] for b in blocks]
    first_fit = {}
    for r in range(total + 1):
        first_fit[r] = next((i for i, d in enumerate(dims) if d <= r), len(dims))

    def rec(start, remaining):
        if remaining == 0:
            yield []
            return
        i = max(start, first_fit[remaining])
        while i < len(blocks):
            dim = dims[i]
            m = 1
            while m * dim <= remaining:
                for rest in rec(i + 1, remaining - m * dim):
                    yield [(i, m)] + rest
                m += 1
            i += 1
            if i < len(blocks) and dims[i] > remaining:
                i = max(i, first_fit[remaining])

    yield from rec(0, total)


def spectrum_linear(n, q, twist):
    p = prime_of(q)
    base = q * q if twist else q
    L = lcm_range(n)
    N = base ** L - 1
    orbs = orbits(q, twist, n, N)
    # blocks: (dim, exps)
    blocks = sorted(((d, o) for d, o in orbs), key=lambda b: -b[0])
    spec = set()
    # group blocks by dimension to prune with det condition at the end
    for ms in multisets(blocks, n):
        exps = []
        det = 0
        mmax = 0
        for i, m in ms:
            o = blocks[i][1]
            exps.extend(o)
            det += m * sum(o)
            mmax = max(mmax, m)
        if det % N != 0:
            continue
        k = proj_order(exps, N)
        for u in unipotent_orders(p, mmax):
            spec.add(lcm(k, u))
    return sorted(spec)


def spectrum_symplectic(n, q):
    """PSp(2n, q)."""
    p = prime_of(q)
    L = lcm_range(2 * n)
    N = q ** L - 1
    orbs = orbits(q, False, 2 * n, N)
    index = {}
    for idx, (d, o) in enumerate(orbs):
        for e in o:
            index[e] = idx
    blocks = []  # (dim, exps, kind) kind: 'pm' | 'sd' | 'pair'
    used = set()
    for idx, (d, o) in enumerate(orbs):
        if idx in used:
            continue
        inv = index[(-o[0]) % N]
        if inv == idx:
            if d == 1:
                # eigenvalue +1 or -1: contributes in pairs
                blocks.append((2, o + o, "pm"))
            else:
                blocks.append((d, o, "sd"))
            used.add(idx)
        else:
            if d > n:
                used.add(idx)
                used.add(inv)
                continue
            blocks.append((2 * d, o + orbs[inv][1], "pair"))
            used.add(idx)
            used.add(inv)
    blocks.sort(key=lambda b: -b[0])
    spec = set()
    for ms in multisets(blocks, 2 * n):
        exps = []
        bmax = 0
        for i, m in ms:
            dim, o, kind = blocks[i]
            exps.extend(o)
            if kind == "pm":
                bmax = max(bmax, 2 * m)
            else:
                bmax = max(bmax, m)
        k = proj_order(exps, N)
        for u in unipotent_orders(p, bmax):
            spec.add(lcm(k, u))
    return sorted(spec)


def main():
    fam, n, q = sys.argv[1], int(sys.argv[2]), int(sys.argv[3])
    if fam == "L":
        print(spectrum_linear(n, q, False))
    elif fam == "U":
        print(spectrum_linear(n, q, True))
    elif fam == "S":
        print(spectrum_symplectic(n // 2, q))


if __name__ == "__main__":
    main()
