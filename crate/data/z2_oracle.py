#!/usr/bin/env python3
# Word problem of Z^2 with a1, a3 = x, x^-1 and a2, a4 = y, y^-1.
import sys

STEP = {1: (1, 0), 2: (0, 1), 3: (-1, 0), 4: (0, -1)}

for line in sys.stdin:
    x = y = 0
    for tok in line.split():
        dx, dy = STEP[int(tok)]
        x, y = x + dx, y + dy
    print("trivial" if x == y == 0 else "nontrivial", flush=True)
