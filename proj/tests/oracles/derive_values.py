"""Independent derivation of the constants frozen into the C++ unit tests.

Uses only numpy / mpmath closed forms, never the library under test.
Run: python3 tests/oracles/derive_values.py
"""
import itertools

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def wendland_c2(t):
    return (1 - t) ** 4 * (4 * t + 1) if t < 1 else mp.mpf(0)


print("wendland_c2(0.5) =", mp.nstr(wendland_c2(mp.mpf("0.5")), 20))
print("distance (1,0,0)-(0,1,0) =", mp.nstr(mp.sqrt(2), 20))

# 1-D unit line of 10 points, support radius 1.25: pairs strictly inside.
line = list(range(10))
nnz = sum(1 for i, j in itertools.product(line, line) if abs(i - j) < 1.25)
print("line nnz =", nnz, "fraction =", nnz / 100)

# radius_neighbors on {0,1,2,3}, center 1, radius 1.5
print("neighbors =", [j for j in range(4) if abs(1 - j) < 1.5])

# det(P^T P) for (0,0),(1,0),(0,1), columns [1, x, y]; B = I.
P = mp.matrix([[1, 0, 0], [1, 1, 0], [1, 0, 1]])
G = P.T * P
print("PtP =", G.tolist(), "det =", mp.det(G))
M = mp.zeros(6, 6)
for i in range(3):
    M[i, i] = 1
    for k in range(3):
        M[i, 3 + k] = P[i, k]
        M[3 + k, i] = P[i, k]
print("det(M) with B=I =", mp.det(M))

# Exact fit of h = 2x + 3y + 1 on 5 sites with a degree-1 tail: unique
# solution lambda = 0, a = (1, 2, 3). Confirm by a dense high-precision solve
# with wendland-c2, alpha = 1 (sites in the unit square).
sites = [(0.1, 0.2), (0.9, 0.1), (0.5, 0.5), (0.2, 0.8), (0.7, 0.9)]
n = len(sites)
A = mp.zeros(n + 3, n + 3)
b = mp.zeros(n + 3, 1)
for i, (xi, yi) in enumerate(sites):
    for j, (xj, yj) in enumerate(sites):
        r = mp.sqrt((mp.mpf(xi) - xj) ** 2 + (mp.mpf(yi) - yj) ** 2)
        A[i, j] = wendland_c2(r)
    for k, v in enumerate((1, xi, yi)):
        A[i, n + k] = v
        A[n + k, i] = v
    b[i] = 2 * mp.mpf(xi) + 3 * mp.mpf(yi) + 1
x = mp.lu_solve(A, b)
print("linear fit lambda max =", mp.nstr(max(abs(x[i]) for i in range(n)), 5),
      "a =", [mp.nstr(x[n + k], 20) for k in range(3)])

# Collinear sites with degree-1 tail: P^T P is singular.
col = np.array([[1, 0, 0], [1, 1, 1], [1, 2, 2], [1, 3, 3]], dtype=float)
print("collinear det(PtP) =", np.linalg.det(col.T @ col), "rank =", np.linalg.matrix_rank(col))

# Normalization of {(1e6, 1e6), (1e6 + 2, 1e6)}.
pts = np.array([[1e6, 1e6], [1e6 + 2, 1e6]])
lo, hi = pts.min(axis=0), pts.max(axis=0)
print("center =", (lo + hi) / 2, "half_extent =", (hi - lo).max() / 2)

# Max |P^T P| entry growth over offset decades for a unit-box cloud.
rng = np.random.default_rng(0)
c = rng.random((50, 2))
prev = None
for T in [0, 10, 100, 1000, 10000]:
    p = np.column_stack([np.ones(50), c + T])
    mx = np.abs(p.T @ p).max()
    if prev is not None:
        print(f"max PtP entry ratio at T={T}: {mx / prev:.3f}")
    prev = mx
