#!/usr/bin/env python3
"""Write crates/core/data/catalog.json.

Lists every nonabelian finite simple group of order below the bound, with
element-order spectra, subgroup markers and minimal transitive degrees.
Spectra of linear, unitary and symplectic groups come from lie_spectra.py;
alternating, L2(q) and Suzuki spectra come from closed formulas; the rest is
ATLAS data.
"""
import json
import os
import sys
from math import factorial, gcd

from sympy import divisors, factorint, isprime

sys.path.insert(0, os.path.dirname(__file__))
from lie_spectra import spectrum_linear, spectrum_symplectic  # noqa: E402

BOUND = 47_377_612_800
OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data", "catalog.json")


def prime_power(q):
    f = factorint(q)
    if len(f) != 1:
        return None
    return next(iter(f.items()))


def prime_powers(limit):
    return [q for q in range(2, limit + 1) if prime_power(q)]


def sl_order(n, q):
    out = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        out *= q**i - 1
    return out


def su_order(n, q):
    out = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        out *= q**i - (-1) ** i
    return out


def sp_order(m, q):
    out = q ** (m * m)
    for i in range(1, m + 1):
        out *= q ** (2 * i) - 1
    return out


def lcm(a, b):
    return a * b // gcd(a, b)


def alternating_spectrum(n):
    out = set()

    def rec(remaining, largest, parts):
        if remaining == 0:
            if sum(1 for p in parts if p % 2 == 0) % 2 == 0:
                o = 1
                for p in parts:
                    o = lcm(o, p)
                out.add(o)
            return
        for p in range(min(remaining, largest), 0, -1):
            rec(remaining - p, p, parts + [p])

    rec(n, n, [])
    return sorted(out)


def l2_spectrum(q):
    p, _ = prime_power(q)
    d = 1 if p == 2 else 2
    out = {1, p} | set(divisors((q - 1) // d)) | set(divisors((q + 1) // d))
    return sorted(out)


def suzuki_spectrum(q):
    r = int(round((2 * q) ** 0.5))
    out = {1, 2, 4}
    for m in (q - 1, q + r + 1, q - r + 1):
        out |= set(divisors(m))
    return sorted(out)


ATLAS_SPECTRA = {
    "O7(3)": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 14, 15, 18, 20],
    "O8+(2)": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15],
    "O8-(2)": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 17, 21, 30],
    "G2(3)": [1, 2, 3, 4, 6, 7, 8, 9, 12, 13],
    "G2(4)": [1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 13, 15, 21],
    "G2(5)": [1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 15, 20, 21, 24, 25, 30, 31],
    "3D4(2)": [1, 2, 3, 4, 6, 7, 8, 9, 12, 13, 14, 18, 21, 28],
    "2F4(2)'": [1, 2, 3, 4, 5, 6, 8, 10, 12, 13, 16],
    "R(27)": [1, 2, 3, 6, 7, 9, 13, 14, 19, 26, 37],
    "M11": [1, 2, 3, 4, 5, 6, 8, 11],
    "M12": [1, 2, 3, 4, 5, 6, 8, 10, 11],
    "J1": [1, 2, 3, 5, 6, 7, 10, 11, 15, 19],
    "M22": [1, 2, 3, 4, 5, 6, 7, 8, 11],
    "J2": [1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 15],
    "M23": [1, 2, 3, 4, 5, 6, 7, 8, 11, 14, 15, 23],
    "HS": [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 15, 20],
    "J3": [1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 17, 19],
    "M24": [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 14, 15, 21, 23],
    "McL": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 15, 30],
    "He": [1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 14, 15, 17, 21, 28],
}

SPORADIC = [
    ("M11", 7920, 11),
    ("M12", 95040, 12),
    ("J1", 175560, 266),
    ("M22", 443520, 22),
    ("J2", 604800, 100),
    ("M23", 10200960, 23),
    ("HS", 44352000, 100),
    ("J3", 50232960, 6156),
    ("M24", 244823040, 24),
    ("McL", 898128000, 275),
    ("He", 4030387200, 2058),
    ("Ru", 145926144000, 4060),
]

GENERATORS = {
    "M11": ["(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"],
    "M12": ["(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)", "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)"],
    "M22": [
        "(1,2,3,4,5,6,7,8,9,10,11)(12,13,14,15,16,17,18,19,20,21,22)",
        "(1,4,5,9,3)(2,8,10,7,6)(12,15,16,20,14)(13,19,21,18,17)",
        "(1,21)(2,10,8,6)(3,13,4,17)(5,19,9,18)(11,22)(12,14,16,20)",
    ],
}

# Isomorphic duplicates: (family, params) -> canonical name.
DUPLICATES = {
    ("psl", (2, 4)): "A5",
    ("psl", (2, 5)): "A5",
    ("psl", (2, 9)): "A6",
    ("psl", (3, 2)): "L2(7)",
    ("psl", (4, 2)): "A8",
    ("psp", (4, 3)): "U4(2)",
}

# Groups known to contain PSL(2,7), beyond the alternating and L2(7^k) rules.
PSL27_ATLAS = {"U3(3)", "L3(4)", "U3(5)", "M22", "J2", "3D4(2)", "McL", "U3(17)", "S6(2)", "O8+(2)", "O8-(2)"}
# Groups known not to contain PSL(2,7) although 168 divides the order.
NO_PSL27_ATLAS = {"J1"}


def record(name, family, params, order, spectrum, spectrum_source, degree, degree_source, aliases=()):
    return {
        "name": name,
        "aliases": list(aliases),
        "family": family,
        "params": list(params),
        "order": order,
        "spectrum": spectrum,
        "spectrum_source": spectrum_source,
        "min_transitive_degree": degree,
        "degree_source": degree_source,
    }


def classical_records():
    out = []
    # alternating
    n = 5
    while factorial(n) // 2 < BOUND:
        out.append(record(f"A{n}", "alternating", [n], factorial(n) // 2, alternating_spectrum(n), "formula", n, "formula"))
        n += 1
    # L2(q)
    for q in prime_powers(6000):
        if q < 4:
            continue
        o = sl_order(2, q) // gcd(2, q - 1)
        if o >= BOUND:
            continue
        deg = {7: 7, 11: 11}.get(q, q + 1)
        src = "atlas-data" if q in (7, 11) else "formula"
        out.append(record(f"L2({q})", "psl", [2, q], o, l2_spectrum(q), "formula", deg, src))
    for n in range(3, 8):
        for q in prime_powers(100):
            o = sl_order(n, q) // gcd(n, q - 1)
            if o >= BOUND:
                continue
            deg = (q**n - 1) // (q - 1)
            out.append(record(f"L{n}({q})", "psl", [n, q], o, spectrum_linear(n, q, False), "computed", deg, "atlas-data"))
    for n in range(3, 8):
        for q in prime_powers(100):
            if (n, q) == (3, 2):
                continue
            o = su_order(n, q) // gcd(n, q + 1)
            if o >= BOUND:
                continue
            if n == 3:
                deg = 50 if q == 5 else q**3 + 1
            elif n == 4:
                deg = (q + 1) * (q**3 + 1)
            else:
                deg = {(5, 2): 165, (6, 2): 672}[(n, q)]
            out.append(record(f"U{n}({q})", "psu", [n, q], o, spectrum_linear(n, q, True), "computed", deg, "atlas-data"))
    for m in range(2, 6):
        for q in prime_powers(100):
            if (m, q) == (2, 2):
                continue
            o = sp_order(m, q) // gcd(2, q - 1)
            if o >= BOUND:
                continue
            if q == 2:
                deg = 2 ** (m - 1) * (2**m - 1)
            elif (m, q) == (2, 3):
                deg = 27
            else:
                deg = (q ** (2 * m) - 1) // (q - 1)
            out.append(record(f"S{2 * m}({q})", "psp", [2 * m, q], o, spectrum_symplectic(m, q), "computed", deg, "atlas-data"))
    # orthogonal and exceptional groups below the bound
    extra = [
        ("O7(3)", "omega", [7, 3], sp_order(3, 3) // 2, 351),
        ("O8+(2)", "omega+", [8, 2], 174182400, 120),
        ("O8-(2)", "omega-", [8, 2], 197406720, 119),
        ("G2(3)", "g2", [3], 3**6 * (3**6 - 1) * (3**2 - 1), 351),
        ("G2(4)", "g2", [4], 4**6 * (4**6 - 1) * (4**2 - 1), 416),
        ("G2(5)", "g2", [5], 5**6 * (5**6 - 1) * (5**2 - 1), 3906),
        ("3D4(2)", "3d4", [2], 2**12 * (2**8 + 2**4 + 1) * (2**6 - 1) * (2**2 - 1), 819),
        ("2F4(2)'", "tits", [], 17971200, 1600),
        ("R(27)", "2g2", [27], 27**3 * (27**3 + 1) * 26, 27**3 + 1),
    ]
    for name, fam, params, o, deg in extra:
        out.append(record(name, fam, params, o, ATLAS_SPECTRA[name], "atlas-data", deg, "atlas-data"))
    for q in (8, 32, 128, 512):
        o = q * q * (q * q + 1) * (q - 1)
        if o < BOUND:
            out.append(record(f"Sz({q})", "2b2", [q], o, suzuki_spectrum(q), "formula", q * q + 1, "atlas-data"))
    for name, o, deg in SPORADIC:
        if o < BOUND:
            out.append(record(name, "sporadic", [], o, ATLAS_SPECTRA[name], "atlas-data", deg, "atlas-data"))
    return out


def canonical(records):
    by_name = {}
    aliases = {}
    for r in records:
        key = (r["family"], tuple(r["params"]))
        target = DUPLICATES.get(key)
        if target:
            aliases.setdefault(target, []).append(r)
            continue
        by_name[r["name"]] = r
    for target, dups in aliases.items():
        base = by_name[target]
        for d in dups:
            assert d["order"] == base["order"], (target, d["name"])
            assert d["spectrum"] == base["spectrum"], (target, d["name"], d["spectrum"], base["spectrum"])
            base["aliases"].append(d["name"])
            base["aliases"].append(f"{d['family']}({','.join(map(str, d['params']))})")
    for r in by_name.values():
        if r["params"]:
            r["aliases"].insert(0, f"{r['family'] if r['family'] != 'alternating' else 'a'}({','.join(map(str, r['params']))})")
        r["aliases"] = sorted(set(r["aliases"]) - {r["name"]}, key=lambda a: (a.lower(), a))
    return sorted(by_name.values(), key=lambda r: (r["order"], r["name"]))


def markers(r):
    name, fam, params, order = r["name"], r["family"], r["params"], r["order"]
    out, src = {}, {}

    def setm(key, value, source):
        out[key] = value
        src[f"markers.{key}"] = source

    # PSL(2,7)
    if fam == "alternating":
        setm("contains_psl27", "yes" if params[0] >= 7 else "no", "formula")
    elif fam == "psl" and params[0] == 2:
        p, _ = prime_power(params[1])
        setm("contains_psl27", "yes" if p == 7 else "no", "formula")
    elif order % 168 != 0:
        setm("contains_psl27", "no", "formula")
    elif name in PSL27_ATLAS:
        setm("contains_psl27", "yes", "atlas-data")
    elif name in NO_PSL27_ATLAS:
        setm("contains_psl27", "no", "atlas-data")
    else:
        setm("contains_psl27", "unknown", "formula")
    # S5
    if fam == "alternating":
        setm("contains_s5", "yes" if params[0] >= 7 else "no", "formula")
    elif fam == "psl" and params[0] == 2:
        q = params[1]
        p, f = prime_power(q)
        setm("contains_s5", "yes" if p == 5 and f % 2 == 0 else "no", "formula")
    elif order % 120 != 0:
        setm("contains_s5", "no", "formula")
    else:
        setm("contains_s5", "unknown", "formula")
    # Q8
    if fam == "alternating":
        setm("contains_q8", "yes" if params[0] >= 8 else "no", "formula")
    elif fam == "psl" and params[0] == 2:
        setm("contains_q8", "no", "formula")
    elif order % 8 != 0:
        setm("contains_q8", "no", "formula")
    elif name == "U3(3)":
        setm("contains_q8", "yes", "computed")
    else:
        setm("contains_q8", "unknown", "formula")
    return out, src


def main():
    recs = canonical(classical_records())
    out = []
    for r in recs:
        m, msrc = markers(r)
        prov = {"order": "formula", "spectrum": r["spectrum_source"], "min_transitive_degree": r["degree_source"]}
        prov.update(msrc)
        entry = {
            "name": r["name"],
            "aliases": r["aliases"],
            "family": r["family"],
            "params": r["params"],
            "order": str(r["order"]),
            "spectrum": r["spectrum"],
            "markers": m,
            "min_transitive_degree": r["min_transitive_degree"],
            "generators": GENERATORS.get(r["name"]),
            "provenance": prov,
        }
        if entry["generators"]:
            prov["generators"] = "atlas-data"
        assert r["spectrum"][0] == 1 and r["order"] % max(r["spectrum"]) == 0, r["name"]
        for o in r["spectrum"]:
            assert r["order"] % o == 0, (r["name"], o)
        out.append(entry)
    below_bound = [e for e in out if int(e["order"]) < 1451520]
    assert all(e["markers"]["contains_psl27"] != "unknown" for e in below_bound)
    with open(OUT, "w") as f:
        f.write("[\n")
        f.write(",\n".join("  " + json.dumps(e, separators=(", ", ": ")) for e in out))
        f.write("\n]\n")
    print(f"{len(out)} records -> {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
