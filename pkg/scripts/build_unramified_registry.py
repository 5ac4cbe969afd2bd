#!/usr/bin/env python3
"""Build the vendored ring registry src/cmprox/data/unramified_registry.json.

The registry pins, for each small prime p and each degree f in the
supported lattice, the monic modulus defining the unramified degree-f
ring, plus the residue-level images of every proper subfield generator
(keys "p,g,f" with g | f).  All of it is recomputable on demand -- the
registry only removes the modulus search and the subfield root find from
run time -- so this script recomputes everything from scratch, checks it,
and writes the file.

Deterministic: reruns regenerate byte-identical output.
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import cmprox.padic as padic                         # noqa: E402
from cmprox.padic import UnramifiedRing              # noqa: E402
from cmprox.residue import eval_at, from_int_coeffs, subfield_root  # noqa: E402

PRIMES = (2, 3, 5, 7, 11, 13)
# degrees 1..6 plus every lcm of a pair of them (embedding targets)
DEGREES = (1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30)
OUT = os.path.join(os.path.dirname(__file__), "..", "src", "cmprox", "data",
                   "unramified_registry.json")


def fresh_rings():
    """Bypass any existing registry file so everything is recomputed."""
    padic._registry_data = {"moduli": {}, "embeddings": {}}
    padic._ring_cache.clear()


def build():
    moduli = {}
    embeddings = {}
    for p in PRIMES:
        for f in DEGREES:
            r = UnramifiedRing(p, f)
            moduli[f"{p},{f}"] = list(r.modulus)
            for g in range(2, f):
                if f % g:
                    continue
                res = subfield_root(r, UnramifiedRing(p, g))
                embeddings[f"{p},{g},{f}"] = list(res)
        print(f"p = {p}: {len(DEGREES)} moduli done")
    return {"moduli": moduli, "embeddings": embeddings}


def validate(reg):
    from cmprox.padic import _fp_is_irreducible
    for key, m in reg["moduli"].items():
        p, f = (int(s) for s in key.split(","))
        assert len(m) == f + 1 and m[-1] == 1, f"bad modulus shape for {key}"
        assert f == 1 or _fp_is_irreducible(m, p), f"reducible modulus for {key}"
    for key, res in reg["embeddings"].items():
        p, g, f = (int(s) for s in key.split(","))
        big = UnramifiedRing(p, f, modulus=reg["moduli"][f"{p},{f}"])
        msub = from_int_coeffs(big, reg["moduli"][f"{p},{g}"])
        val = eval_at(big, msub, tuple(res))
        assert val == big.zero_elem, f"embedding {key} is not a root"
    print(f"validated {len(reg['moduli'])} moduli, "
          f"{len(reg['embeddings'])} embeddings")


def main():
    fresh_rings()
    reg = build()
    validate(reg)
    text = json.dumps(reg, sort_keys=True, indent=0) + "\n"
    with open(OUT, "w") as fh:
        fh.write(text)
    print(f"wrote {OUT} ({len(text)} bytes)")


if __name__ == "__main__":
    main()
