"""Exact algorithms on finite-index subgroups of SL2(Z).

Subgroups are handled through their right-coset permutation action: a pair
of permutations describing right multiplication by the generators S and T
on the cosets, with the basepoint coset fixed exactly by the subgroup
elements.  Widths are computed in the projective quotient (the sign is
folded away through the central element S^2 = -I), matching the definition
of cusp width by plus-or-minus conjugates of unipotents.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm


class SL2Error(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mat2Z:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise SL2Error("matrix must have determinant 1")

    def __matmul__(self, o):
        return Mat2Z(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                     self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inv(self):
        return Mat2Z(self.d, -self.b, -self.c, self.a)

    def __neg__(self):
        return Mat2Z(-self.a, -self.b, -self.c, -self.d)

    def mod(self, n):
        return (self.a % n, self.b % n, self.c % n, self.d % n)

    def acts_on_infinity(self):
        """Image of the cusp at infinity, as 'inf' or a reduced Fraction."""
        if self.c == 0:
            return "inf"
        return Fraction(self.a, self.c)


I2 = Mat2Z(1, 0, 0, 1)
S = Mat2Z(0, -1, 1, 0)
T = Mat2Z(1, 1, 0, 1)
U = T


def t_power(n):
    return Mat2Z(1, n, 0, 1)


def word_decompose(M: Mat2Z):
    """Word in S and T with product equal to sign * M; returns (word, sign).

    Tokens are ("S", 1) and ("T", k); the standard continued-fraction
    reduction on the left column.
    """
    word = []
    sign = 1
    cur = M
    while cur.c != 0:
        if cur.c < 0:
            cur = -cur
            sign = -sign
        # q makes |a - qc| <= c/2, shrinking the left column
        q = (2 * cur.a + cur.c) // (2 * cur.c)
        # cur = T^q S^-1 next  with  next = S T^-q cur
        nxt = S @ (t_power(-q) @ cur)
        word.append(("T", q))
        word.append(("S", 1))
        sign = -sign  # S^-1 = -S
        cur = nxt
    if cur.a == -1:
        sign = -sign
        cur = -cur
    if cur.b:
        word.append(("T", cur.b))
    return [w for w in word if not (w[0] == "T" and w[1] == 0)], sign


def word_to_matrix(word, sign=1):
    out = I2
    for tag, k in word:
        out = out @ (S if tag == "S" else t_power(k))
    return out if sign == 1 else -out


# ---------------------------------------------------------------------------
# coset actions
# ---------------------------------------------------------------------------

def _compose(p, q):
    """Permutation 'apply p, then q'."""
    return tuple(q[x] for x in p)


def _inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _identity(n):
    return tuple(range(n))


def _cycle_power(perm, i, k):
    """perm^k applied to i, reduced along the cycle through i."""
    cycle = [i]
    j = perm[i]
    while j != i:
        cycle.append(j)
        j = perm[j]
    return cycle[k % len(cycle)]


@dataclass
class CosetAction:
    """Right-coset action of a finite-index subgroup of SL2(Z).

    perm_s[i] and perm_t[i] are the cosets of (rep_i S) and (rep_i T); the
    basepoint coset 0 is the subgroup itself.  reps, when present, holds one
    explicit matrix per coset.
    """

    degree: int
    perm_s: tuple
    perm_t: tuple
    reps: list = None
    name: str = ""

    def __post_init__(self):
        n = self.degree
        if sorted(self.perm_s) != list(range(n)) or sorted(self.perm_t) != list(range(n)):
            raise SL2Error("generator images are not permutations")
        s4 = _compose(_compose(self.perm_s, self.perm_s),
                      _compose(self.perm_s, self.perm_s))
        if s4 != _identity(n):
            raise SL2Error("S-relation S^4 = 1 violated")
        st = _compose(self.perm_s, self.perm_t)
        st3 = _compose(_compose(st, st), st)
        if st3 != _compose(self.perm_s, self.perm_s):
            raise SL2Error("relation (ST)^3 = S^2 violated")
        if not self._transitive():
            raise SL2Error("coset action is not transitive")

    def _transitive(self):
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for p in (self.perm_s, self.perm_t, _inverse(self.perm_t)):
                j = p[i]
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == self.degree

    @property
    def minus_identity_pairing(self):
        return _compose(self.perm_s, self.perm_s)

    @property
    def contains_minus_identity(self):
        return self.minus_identity_pairing == _identity(self.degree)

    def psl_degree(self):
        pairing = self.minus_identity_pairing
        return sum(1 for i in range(self.degree) if pairing[i] >= i)

    def act_word(self, i, word, sign=1):
        """Coset index of rep_i * (sign * product(word))."""
        for tag, k in word:
            if tag == "S":
                p = self.perm_s if k > 0 else _inverse(self.perm_s)
                for _ in range(abs(k)):
                    i = p[i]
            else:
                i = _cycle_power(self.perm_t, i, k)
        if sign < 0:
            i = self.minus_identity_pairing[i]
        return i

    def act_matrix(self, i, M: Mat2Z):
        word, sign = word_decompose(M)
        return self.act_word(i, word, sign)


def contains(G: CosetAction, M: Mat2Z) -> bool:
    """Membership of M in the subgroup (exactly, when -I belongs to it;
    otherwise the sign is honored literally)."""
    return G.act_matrix(0, M) == 0


def contains_projectively(G: CosetAction, M: Mat2Z) -> bool:
    """Membership of M in the group generated by the subgroup and -I."""
    i = G.act_matrix(0, M)
    return i == 0 or G.minus_identity_pairing[i] == 0


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def full_group() -> CosetAction:
    return CosetAction(1, (0,), (0,), [I2], name="SL2(Z)")


def _bfs_action(label, start_mat=I2, name=""):
    """Breadth-first coset enumeration driven by a labeling function that is
    constant exactly on right cosets."""
    reps = [start_mat]
    index = {label(start_mat): 0}
    order = [start_mat]
    k = 0
    while k < len(order):
        M = order[k]
        k += 1
        for g in (S, T, T.inv()):
            nxt = M @ g
            lb = label(nxt)
            if lb not in index:
                index[lb] = len(reps)
                reps.append(nxt)
                order.append(nxt)
    n = len(reps)
    perm_s = tuple(index[label(reps[i] @ S)] for i in range(n))
    perm_t = tuple(index[label(reps[i] @ T)] for i in range(n))
    return CosetAction(n, perm_s, perm_t, reps, name=name)


def principal_congruence(N: int) -> CosetAction:
    """Coset action of the principal congruence subgroup of level N."""
    if N < 1:
        raise SL2Error("level must be a positive integer")
    if N == 1:
        return full_group()
    return _bfs_action(lambda M: M.mod(N), name="Gamma(%d)" % N)


def _p1_canonical(c, d, N):
    best = None
    for u in range(1, N):
        if gcd(u, N) != 1:
            continue
        cand = ((u * c) % N, (u * d) % N)
        if best is None or cand < best:
            best = cand
    return best


def gamma0(N: int) -> CosetAction:
    """Coset action of the Hecke congruence subgroup (lower-left entry
    divisible by N), via the projective line over Z/N."""
    if N < 1:
        raise SL2Error("level must be a positive integer")
    if N == 1:
        return full_group()
    return _bfs_action(lambda M: _p1_canonical(M.c, M.d, N),
                       name="Gamma_0(%d)" % N)


def gamma_upper0(N: int) -> CosetAction:
    """The transposed variant (upper-right entry divisible by N)."""
    if N < 1:
        raise SL2Error("level must be a positive integer")
    if N == 1:
        return full_group()
    return _bfs_action(lambda M: _p1_canonical(M.b, M.a, N),
                       name="Gamma^0(%d)" % N)


def action_from_membership(member, index_bound: int, name="") -> CosetAction:
    """Generic breadth-first enumeration from a membership oracle.

    member(M) must be constant on cosets of the target subgroup (and include
    the sign convention the caller wants).  Enumeration past index_bound
    signals a bug in the oracle rather than silently truncating.
    """
    reps = [I2]
    order = [I2]
    k = 0
    while k < len(order):
        M = order[k]
        k += 1
        for g in (S, T, T.inv()):
            nxt = M @ g
            if not any(member(nxt @ r.inv()) for r in reps):
                if len(reps) >= index_bound:
                    raise SL2Error("coset enumeration exceeded the certified "
                                   "index bound %d" % index_bound)
                reps.append(nxt)
                order.append(nxt)

    def coset_of(M):
        for i, r in enumerate(reps):
            if member(M @ r.inv()):
                return i
        raise SL2Error("coset lookup failed")

    n = len(reps)
    perm_s = tuple(coset_of(reps[i] @ S) for i in range(n))
    perm_t = tuple(coset_of(reps[i] @ T) for i in range(n))
    return CosetAction(n, perm_s, perm_t, reps, name=name)


# ---------------------------------------------------------------------------
# cusps and levels
# ---------------------------------------------------------------------------

@dataclass
class CuspData:
    representative: object
    width: int
    orbit_size: int


def cusp_data(G: CosetAction):
    """One entry per cusp of the subgroup (taken together with -I).

    Cusps correspond to T-cycles of the coset action folded through the
    central pairing by -I.  A raw cycle of length L either pairs with a
    disjoint cycle (width L, two raw cycles), is fixed pointwise by the
    pairing (width L), or is mapped to itself with a half-period shift
    (width L/2)."""
    pairing = G.minus_identity_pairing
    seen = [False] * G.degree
    out = []
    for start in range(G.degree):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = G.perm_t[i]
        L = len(cycle)
        mate = pairing[cycle[0]]
        if mate in cycle:
            shift = cycle.index(mate)
            width = L // 2 if shift and 2 * shift == L else L
            orbit = L
        else:
            width = L
            orbit = 2 * L
            j = mate
            while not seen[j]:
                seen[j] = True
                j = G.perm_t[j]
        rep = G.reps[cycle[0]].acts_on_infinity() if G.reps else None
        out.append(CuspData(rep, width, orbit))
    return out


def wohlfahrt_level(G: CosetAction) -> int:
    """Least common multiple of all cusp widths."""
    return lcm(*(c.width for c in cusp_data(G)))


# ---------------------------------------------------------------------------
# conjugation by diag(p, 1)
# ---------------------------------------------------------------------------

def conj_A_intersect(G: CosetAction, p: int) -> CosetAction:
    """Coset action of A^-1 G A intersected with SL2(Z), A = diag(p, 1).

    Membership oracle: M belongs iff A M A^-1 is integral (p divides the
    lower-left entry) and lands in G; enumeration is certified to stay
    within index [SL2 : G] * (p + 1)."""
    if p < 2:
        raise SL2Error("p must be at least 2")

    def member(M):
        if M.c % p:
            return False
        conj = Mat2Z(M.a, p * M.b, M.c // p, M.d)
        return contains_projectively(G, conj)

    bound = G.degree * (p + 1)
    return action_from_membership(member, bound,
                                  name="A^-1(%s)A cap SL2(Z)" % (G.name or "G"))


# ---------------------------------------------------------------------------
# index formula
# ---------------------------------------------------------------------------

def sl2_order_mod(N: int) -> int:
    """|SL2(Z/N)| = N^3 prod_{p | N} (1 - p^-2)."""
    if N == 1:
        return 1
    out = Fraction(N) ** 3
    n = N
    p = 2
    while p * p <= n:
        if n % p == 0:
            out *= 1 - Fraction(1, p * p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out *= 1 - Fraction(1, n * n)
    assert out.denominator == 1
    return int(out)


@dataclass
class Gamma2IndexReport:
    N: int
    index: int                    # [Gamma(2) : Gamma(N)], exact
    half_index: Fraction          # (1/2) of it, the curve degree for N > 2
    bound_rational: Fraction      # N^3 / 12
    bound_float: float            # divided by zeta(2), rounded down


def index_gamma2_gammaN(N: int, cross_check: bool = None) -> Gamma2IndexReport:
    """Exact index of the level-N principal subgroup inside the level-2 one,
    with the analytic lower bound N^3/(12 zeta(2))."""
    if N < 2 or N % 2:
        raise SL2Error("N must be an even integer >= 2")
    exact = sl2_order_mod(N) // 6
    if cross_check is None:
        cross_check = N <= 24
    if cross_check:
        enum = principal_congruence(N).degree // principal_congruence(2).degree
        if enum != exact:
            raise SL2Error("index formula and enumeration disagree")
    import mpmath as mp
    with mp.workprec(80):
        zeta2 = mp.pi ** 2 / 6
        bound = mp.mpf(N) ** 3 / (12 * zeta2)
        bound_down = float(bound) * (1 - 1e-14)
    return Gamma2IndexReport(N, exact, Fraction(exact, 2), Fraction(N ** 3, 12),
                             bound_down)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def random_subgroup(max_index: int, rng: random.Random) -> CosetAction:
    """Random finite-index subgroup containing -I, as a random transitive
    pair of permutations with sigma_s^2 = sigma_r^3 = 1 (rejection sampled)."""
    while True:
        n = rng.randint(1, max_index)
        idx = list(range(n))
        rng.shuffle(idx)
        sigma_s = list(range(n))
        for i in range(0, n - 1, 2):
            if rng.random() < 0.8:
                a, b = idx[i], idx[i + 1]
                sigma_s[a], sigma_s[b] = b, a
        sigma_r = list(range(n))
        rng.shuffle(idx)
        i = 0
        while i + 2 < n:
            if rng.random() < 0.8:
                a, b, c = idx[i], idx[i + 1], idx[i + 2]
                sigma_r[a], sigma_r[b], sigma_r[c] = b, c, a
            i += 3
        perm_s = tuple(sigma_s)
        perm_t = tuple(sigma_r[perm_s[i]] for i in range(n))
        try:
            return CosetAction(n, perm_s, perm_t, name="random(%d)" % n)
        except SL2Error:
            continue


def intersect_actions(G: CosetAction, H: CosetAction, name="") -> CosetAction:
    """Coset action of the intersection, from the diagonal action on pairs."""
    start = (0, 0)
    index = {start: 0}
    order = [start]
    k = 0
    gens = [("s", G.perm_s, H.perm_s), ("t", G.perm_t, H.perm_t),
            ("t'", _inverse(G.perm_t), _inverse(H.perm_t))]
    while k < len(order):
        i, j = order[k]
        k += 1
        for _, pg, ph in gens:
            nxt = (pg[i], ph[j])
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
    n = len(order)
    perm_s = tuple(index[(G.perm_s[i], H.perm_s[j])] for i, j in order)
    perm_t = tuple(index[(G.perm_t[i], H.perm_t[j])] for i, j in order)
    reps = None
    if G.reps and H.reps:
        reps = None  # pair cosets have no single natural matrix
    return CosetAction(n, perm_s, perm_t, reps, name=name or "intersection")


def schreier_generators(G: CosetAction):
    """Schreier generators of the subgroup from the coset graph."""
    words = {0: []}
    order = [0]
    k = 0
    while k < len(order):
        i = order[k]
        k += 1
        for tag, perm, mat in (("S", G.perm_s, S), ("T", G.perm_t, T)):
            j = perm[i]
            if j not in words:
                words[j] = words[i] + [(tag, 1)]
                order.append(j)
    mats = {i: word_to_matrix(w) for i, w in words.items()}
    gens = []
    for i in range(G.degree):
        for tag, perm, g in (("S", G.perm_s, S), ("T", G.perm_t, T)):
            j = perm[i]
            gamma = (mats[i] @ g) @ mats[j].inv()
            if gamma not in (I2, -I2):
                gens.append(gamma)
    return gens


def subgroup_json(G: CosetAction):
    cusps = cusp_data(G)
    return {
        "degree": G.degree,
        "psl_degree": G.psl_degree(),
        "contains_minus_identity": G.contains_minus_identity,
        "cusps": [{"rep": str(c.representative), "width": c.width}
                  for c in cusps],
        "level": wohlfahrt_level(G),
        "index": G.degree,
    }
