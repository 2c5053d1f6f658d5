"""Regenerate data/factors.txt: prime factorizations of 2**k - 1 for 2 <= k <= 128."""

import sys
from pathlib import Path

from sympy import factorint

OUT = Path(__file__).resolve().parents[1] / "src" / "caprng" / "data" / "factors.txt"


def main(k_max=128):
    lines = ["# k: prime factors of 2**k - 1 (with multiplicity)"]
    for k in range(2, k_max + 1):
        f = factorint(2**k - 1)
        primes = [p for p in sorted(f) for _ in range(f[p])]
        lines.append(f"{k}: " + " ".join(map(str, primes)))
        print(lines[-1], file=sys.stderr, flush=True)
    OUT.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
