"""How large is an honest map certificate?

Each certificate carries the whole adjacency matrix, so its size grows like
n^2 / 2 bits.  This fits a quadratic to the exact encoded sizes.

    python demos/certificate_sizes.py
"""

import numpy as np

from localdecision.graph import cycle
from localdecision.nld import certificate_size_bits, honest_certificates

if __name__ == "__main__":
    ns = np.arange(4, 33)
    bits = np.array([max(certificate_size_bits(honest_certificates(cycle(int(n)))))
                     for n in ns])
    for n, b in zip(ns[::4], bits[::4]):
        print(f"n={n:>2} bits={b:>4} bits/n^2={b / n ** 2:.3f}")
    a, b, c = np.polyfit(ns, bits, 2)
    print(f"\nfit: {a:.3f} n^2 + {b:.2f} n + {c:.1f}")
    print(f"C = max bits/n^2 = {max(bits / ns ** 2):.3f}")
