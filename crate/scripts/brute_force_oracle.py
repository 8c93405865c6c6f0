#!/usr/bin/env python3
"""Independent brute-force oracle for the frozen counts used in the Rust tests.

Everything here is computed from first principles: bases are enumerated from
explicit matrices (plain Gaussian elimination mod p / GF(4) tables), ranks are
max |B & X| over bases, isomorphisms are checked by trying every bijection.
Nothing is shared with the Rust implementation.
"""
from itertools import combinations, permutations

def rank_mod_p(rows, p):
    m = [list(r) for r in rows]
    rk, col = 0, 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = pow(m[rk][col], p - 2, p)
        m[rk] = [(v * inv) % p for v in m[rk]]
        for i in range(len(m)):
            if i != rk and m[i][col] % p:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk

class Mat:
    def __init__(self, ground, bases):
        self.E = list(ground)
        self.B = [frozenset(b) for b in bases]
        self.r = len(self.B[0])
    def rank(self, X):
        X = set(X)
        return max(len(b & X) for b in self.B)

def from_columns(labels, cols, p):
    r = rank_mod_p([list(c) for c in zip(*cols)], p)
    bases = []
    for S in combinations(range(len(cols)), r):
        sub = [[cols[j][i] for j in S] for i in range(len(cols[0]))]
        if rank_mod_p(sub, p) == r:
            bases.append([labels[j] for j in S])
    return Mat(labels, bases)

def subsets(E, k=None):
    if k is not None:
        return [frozenset(c) for c in combinations(E, k)]
    out = []
    for k in range(len(E) + 1):
        out += [frozenset(c) for c in combinations(E, k)]
    return out

def circuits(M):
    out = []
    for X in subsets(M.E):
        if M.rank(X) < len(X) and all(M.rank(X - {e}) == len(X) - 1 for e in X):
            out.append(X)
    return out

def closure(M, X):
    r = M.rank(X)
    return frozenset(e for e in M.E if M.rank(set(X) | {e}) == r)

def flats(M):
    return [X for X in subsets(M.E) if closure(M, X) == X]

def hyperplanes(M):
    return [F for F in flats(M) if M.rank(F) == M.r - 1]

def dual(M):
    E = set(M.E)
    return Mat(M.E, [E - b for b in M.B])

def minor(M, C=(), D=()):
    C, D = set(C), set(D)
    E = [e for e in M.E if e not in C and e not in D]
    rc = M.rank(C)
    r = M.rank(set(E) | C) - rc
    bases = [S for S in combinations(E, r) if M.rank(set(S) | C) - rc == r]
    return Mat(E, bases)

def relax(M, C):
    return Mat(M.E, M.B + [frozenset(C)])

def iso(M, N):
    if len(M.E) != len(N.E) or M.r != N.r or len(M.B) != len(N.B):
        return False
    NB = set(N.B)
    for perm in permutations(N.E):
        f = dict(zip(M.E, perm))
        if all(frozenset(f[x] for x in b) in NB for b in M.B):
            return True
    return False

def lam(M, X):
    return M.rank(X) + M.rank(set(M.E) - set(X)) - M.r

def three_connected(M):
    E = set(M.E)
    for A in subsets(M.E):
        B = E - A
        for j in (1, 2):
            if len(A) >= j and len(B) >= j and lam(M, A) <= j - 1:
                return False
    return True

def is_modular(M, X):
    return all(M.rank(X) + M.rank(F) == M.rank(set(X) | F) + M.rank(set(X) & F) for F in flats(M))

def points_in(M, F):
    pts = set()
    for e in F:
        if M.rank({e}) == 1:
            pts.add(closure(M, {e}))
    return len(pts)

def modular_k_lines(M, k):
    return [F for F in flats(M) if M.rank(F) == 2 and points_in(M, F) == k and is_modular(M, F)]

def uniform(m, n):
    E = [chr(ord('a') + i) for i in range(n)]
    return Mat(E, [list(c) for c in combinations(E, m)])

report = {}
# Fano: all nonzero GF(2) 3-vectors, in the order first-nonzero=1 lexicographic
fano_cols = [(0,0,1),(0,1,0),(0,1,1),(1,0,0),(1,0,1),(1,1,0),(1,1,1)]
F7 = from_columns(list("abcdefg"), fano_cols, 2)
tri = [C for C in circuits(F7) if len(C) == 3]
hyp = hyperplanes(F7)
ch = sorted([C for C in circuits(F7) if C in set(hyp)], key=lambda s: sorted(s))
report['F7'] = dict(rank=F7.r, bases=len(F7.B), triangles=len(tri), circuit_hyperplanes=len(ch),
                    three_connected=three_connected(F7),
                    all_lines_modular=all(is_modular(F7, L) for L in tri))
F7m = relax(F7, ch[0])
report['F7-'] = dict(bases=len(F7m.B), triangles=len([C for C in circuits(F7m) if len(C) == 3]),
                     iso_F7=iso(F7, F7m))
# contraction of F7 and simplification
F7c = minor(F7, C={'a'})
classes = {closure(F7c, {e}) for e in F7c.E if F7c.rank({e}) == 1}
report['F7/e'] = dict(rank=F7c.r, parallel_classes=len(classes))
# closure of two points of F7 is the line
report['F7 cl{a,b}'] = sorted(closure(F7, {'a', 'b'}))

# P6
P6 = Mat(list("abcdef"), [c for c in combinations("abcdef", 3) if set(c) != set("abc")])
D6 = dual(P6)
report['P6'] = dict(triangles=[''.join(sorted(C)) for C in circuits(P6) if len(C) == 3],
                    triads=[''.join(sorted(C)) for C in circuits(D6) if len(C) == 3],
                    three_connected=three_connected(P6))

# U3,6 local connectivity, U2,5 kappa
U36 = uniform(3, 6)
report['U36 sqcap({a,b},{c,d})'] = U36.rank('ab') + U36.rank('cd') - U36.rank('abcd')
U25 = uniform(2, 5)
best = min(lam(U25, set('ab') | set(A)) for A in subsets(['e']))
report['U25 kappa({a,b},{c,d})'] = best
report['U46 3conn'] = three_connected(uniform(4, 6))

# S(5,6,12)
A = [[0,1,1,1,1,1],[1,0,1,-1,-1,1],[1,1,0,1,-1,-1],[1,-1,1,0,1,-1],[1,-1,-1,1,0,1],[1,1,-1,-1,1,0]]
rows = [[1 if i == j else 0 for j in range(6)] + [v % 3 for v in A[i]] for i in range(6)]
cols = [tuple(rows[i][j] for i in range(6)) for j in range(12)]
S = from_columns(list("abcdefghijkl"), cols, 3)
report['S5612'] = dict(rank=S.r, bases=len(S.B))
P8 = minor(S, C={'c', 'd'}, D={'a', 'b'})
P8c = circuits(P8)
P8h = set(hyperplanes(P8))
P8ch = [C for C in P8c if C in P8h]
pairs = [(X, Y) for X, Y in combinations(P8ch, 2) if not (X & Y)]
report['P8'] = dict(rank=P8.r, n=len(P8.E), bases=len(P8.B), circuit_hyperplanes=len(P8ch),
                    disjoint_pairs=len(pairs), self_dual=iso(P8, dual(P8)))
P8pp = relax(relax(P8, pairs[0][0]), pairs[0][1])
report['P8pp'] = dict(bases=len(P8pp.B), four_point_lines=len([F for F in flats(P8pp) if P8pp.rank(F) == 2 and points_in(P8pp, F) == 4]))

# M(K4) from spanning trees; Dowling Q3(trivial) and Q3(Z2)
edges = [(1,2),(1,3),(1,4),(2,3),(2,4),(3,4)]
def acyclic(es):
    parent = {v: v for v in range(1, 5)}
    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v
    for u, v in es:
        a, b = find(u), find(v)
        if a == b:
            return False
        parent[a] = b
    return True
lab = ["e%d%d" % e for e in edges]
MK4 = Mat(lab, [[lab[i] for i in S_] for S_ in combinations(range(6), 3) if acyclic([edges[i] for i in S_])])
report['MK4'] = dict(bases=len(MK4.B), triangles=len([C for C in circuits(MK4) if len(C) == 3]))

def dowling(order, mul, ident):
    E = ['a1', 'a2', 'a3'] + ['g%d_%d' % (i, g) for i in (1, 2, 3) for g in range(order)]
    lines = []
    for i in (1, 2, 3):
        lines.append({'g%d_%d' % (i, g) for g in range(order)} | ({'a1', 'a2', 'a3'} - {'a%d' % i}))
    for g1 in range(order):
        for g2 in range(order):
            for g3 in range(order):
                if mul[mul[g1][g2]][g3] == ident:
                    lines.append({'g1_%d' % g1, 'g2_%d' % g2, 'g3_%d' % g3})
    bases = [c for c in combinations(E, 3) if not any(set(c) <= L for L in lines)]
    return Mat(E, bases)
Q1 = dowling(1, [[0]], 0)
report['Q3(1) iso MK4'] = iso(Q1, MK4)
Q2 = dowling(2, [[0, 1], [1, 0]], 0)
report['Q3(Z2)'] = dict(n=len(Q2.E), modular_4pt_lines=len(modular_k_lines(Q2, 4)))

# binary spike, relaxed spike, extension
lab = ['t', 'x1', 'x2', 'x3', 'x4', 'y1', 'y2', 'y3', 'y4']
one = (1, 1, 1, 1)
ecols = [one] + [tuple(1 if j == i else 0 for j in range(4)) for i in range(4)] \
        + [tuple(0 if j == i else 1 for j in range(4)) for i in range(4)]
N = from_columns(lab, ecols, 2)
Cset = frozenset({'x1', 'x2', 'x3', 'y4'})
report['spike C circuit-hyperplane'] = Cset in set(circuits(N)) and Cset in set(hyperplanes(N))
M = relax(N, Cset)
report['relaxed M/x4\\y4 ~ F7'] = iso(minor(M, C={'x4'}, D={'y4'}), F7)
report['relaxed M/y4\\x4 ~ F7-'] = iso(minor(M, C={'y4'}, D={'x4'}), F7m)
# single-element extension: e on the line cl{t,x4,y4} and the plane cl{x1,x2,x3}
L = closure(M, {'t', 'x4', 'y4'})
P = closure(M, {'x1', 'x2', 'x3'})
Fl = flats(M)
cut = [F for F in Fl if L <= F or P <= F]
cutset = set(cut)
def ext_rank(X):
    X = set(X)
    if 'e' not in X:
        return M.rank(X)
    Y = X - {'e'}
    return M.rank(Y) if closure(M, Y) in cutset else M.rank(Y) + 1
E10 = lab + ['e']
M10 = Mat(E10, [c for c in combinations(E10, 4) if ext_rank(c) == 4])
report['ext10'] = dict(n=len(M10.E), rank=M10.r, bases=len(M10.B),
                       three_connected=three_connected(M10),
                       line_modular=is_modular(M10, {'t', 'x4', 'y4', 'e'}),
                       line_is_flat=closure(M10, {'t', 'x4', 'y4', 'e'}) == frozenset({'t', 'x4', 'y4', 'e'}),
                       modular_4pt_lines=len(modular_k_lines(M10, 4)))
for k, v in report.items():
    print(k, '=>', v)
