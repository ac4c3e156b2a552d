"""Brute-force ground truth for minimal gate counts.

Minimal T-count and H-count are decided by meet-in-the-middle over left
cosets of the relevant finite group (Cliffords, or the Hadamard-free group),
with the coset of a matrix labelled by its value-lexicographically least
left-multiple.  Minimal Toffoli count runs over the affine-reversible coset
quotient.  A deliberately simple breadth-first search over full single-qubit
unitaries provides the independent cross-check for the coset machinery.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .circuit import Circuit
from .clifford import (
    UnitaryCatalog,
    enumerate_clifford_group,
    flat_to_key,
    lexmin_row,
    phase_canonicalize_batch,
)
from .exact import ExactUnitary, exact_simulate
from .circuit import circuit as make_circuit
from .circuit import gate as make_gate


class ResourceCapError(RuntimeError):
    """A node or time cap was hit; distinct from a k_max EXCEEDS result."""


@dataclass
class SearchBudget:
    k_max: int
    node_cap: int = 10**8
    time_cap: float = 300.0

    def __post_init__(self):
        if self.k_max < 0:
            raise ValueError("k_max must be nonnegative")


def _as_budget(b) -> SearchBudget:
    return b if isinstance(b, SearchBudget) else SearchBudget(int(b))


class _Meter:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.t0 = time.monotonic()

    def tick(self, cost: int = 1):
        self.nodes += cost
        if self.nodes > self.budget.node_cap:
            raise ResourceCapError(f"node cap {self.budget.node_cap} exceeded")
        if time.monotonic() - self.t0 > self.budget.time_cap:
            raise ResourceCapError(f"time cap {self.budget.time_cap}s exceeded")


# ---------------------------------------------------------------------------
# generic left-coset search over a finite group with one inserted gate family
# ---------------------------------------------------------------------------


class CosetSearcher:
    """Least k with U = w^j V_0 g_{i_1} V_1 ... g_{i_k} V_k, V_m in the group.

    Requires every inserted gate g to satisfy g-dagger in group.g.group, so
    suffixes invert back into the searched sets (true for T = S-dagger-free
    insertion into the Clifford group, and for the self-inverse H into the
    Hadamard-free group).
    """

    def __init__(self, catalog: UnitaryCatalog, inserted: list[ExactUnitary]):
        self.cat = catalog
        self.inserted = inserted
        self._expanders: list[np.ndarray] | None = None
        self._expander_ks: list[np.ndarray] | None = None
        # level_reps[j]: representatives of cosets first reached with j insertions
        self.level_reps: list[list[ExactUnitary]] = []
        self.level_keys: list[set[bytes]] = []
        self._seen: set[bytes] = set()

    # -- coset canonicalisation ------------------------------------------

    def coset_key(self, u: ExactUnitary) -> bytes:
        if u.planes.dtype != np.int64:
            raise TypeError("coset search requires int64 planes")
        prod = kernels.ring_mm_batch(self.cat.planes, u.planes)
        ks = (self.cat.ks + u.k).astype(np.int64)
        prod, ks = kernels.sqrt2_reduce_batch(prod, ks)
        flat = phase_canonicalize_batch(prod, ks)
        return flat_to_key(lexmin_row(flat))

    # -- expansion stacks ---------------------------------------------------

    def _stabilizer_rep_indices(self, g: ExactUnitary) -> list[int]:
        """Indices D_r with {g C : C in group} = disjoint union of cosets
        group.(g D_r); one rep per right coset of K = {D : g D g* in group}."""
        cat = self.cat
        gd = g.dagger()
        tmp = kernels.ring_mm_batch(cat.planes, gd.planes)
        tks = (cat.ks + gd.k).astype(np.int64)
        tmp, tks = kernels.sqrt2_reduce_batch(tmp, tks)
        conj = kernels.ring_mm_batch_left(g.planes, tmp)
        cks = (tks + g.k).astype(np.int64)
        conj, cks = kernels.sqrt2_reduce_batch(conj, cks)
        flat = phase_canonicalize_batch(conj, cks)
        k_idx = [
            i for i in range(len(cat)) if cat.lookup(flat_to_key(flat[i])) is not None
        ]
        k_planes = cat.planes[k_idx]
        k_ks = cat.ks[k_idx]
        covered = np.zeros(len(cat), dtype=bool)
        reps = []
        for i in range(len(cat)):
            if covered[i]:
                continue
            reps.append(i)
            prod = kernels.ring_mm_batch(k_planes, cat.planes[i])
            pks = (k_ks + cat.ks[i]).astype(np.int64)
            prod, pks = kernels.sqrt2_reduce_batch(prod, pks)
            flat2 = phase_canonicalize_batch(prod, pks)
            for row in flat2:
                j = cat.lookup(flat_to_key(row))
                if j is not None:
                    covered[j] = True
        return reps

    def _build_expanders(self):
        if self._expanders is not None:
            return
        self._expanders = []
        self._expander_ks = []
        for g in self.inserted:
            reps = self._stabilizer_rep_indices(g)
            stack = kernels.ring_mm_batch_left(g.planes, self.cat.planes[reps])
            ks = (self.cat.ks[reps] + g.k).astype(np.int64)
            stack, ks = kernels.sqrt2_reduce_batch(stack, ks)
            self._expanders.append(stack)
            self._expander_ks.append(ks)

    # -- breadth-first level construction ------------------------------------

    def ensure_levels(self, depth: int, meter: _Meter):
        if not self.level_reps:
            ident = ExactUnitary.identity(self.cat.n)
            key = self.coset_key(ident)
            self.level_reps.append([ident])
            self.level_keys.append({key})
            self._seen.add(key)
        self._build_expanders()
        while len(self.level_reps) <= depth:
            new_reps: list[ExactUnitary] = []
            new_keys: set[bytes] = set()
            for w in self.level_reps[-1]:
                for stack, ks in zip(self._expanders, self._expander_ks):
                    prod = kernels.ring_mm_batch(stack, w.planes)
                    pks = (ks + w.k).astype(np.int64)
                    prod, pks = kernels.sqrt2_reduce_batch(prod, pks)
                    for i in range(len(prod)):
                        meter.tick()
                        cand = ExactUnitary(self.cat.n, prod[i].copy(), int(pks[i]))
                        key = self.coset_key(cand)
                        if key not in self._seen:
                            self._seen.add(key)
                            new_keys.add(key)
                            new_reps.append(cand)
            self.level_reps.append(new_reps)
            self.level_keys.append(new_keys)

    def cumulative_keys(self, depth: int) -> set[bytes]:
        out: set[bytes] = set()
        for j in range(min(depth, len(self.level_keys) - 1) + 1):
            out |= self.level_keys[j]
        return out

    # -- queries ------------------------------------------------------------

    def min_count(self, u: ExactUnitary, budget) -> int | None:
        """Least insertion count up to budget.k_max, or None (EXCEEDS)."""
        budget = _as_budget(budget)
        meter = _Meter(budget)
        for k in range(budget.k_max + 1):
            half = k - k // 2
            self.ensure_levels(max(half, k // 2), meter)
            target_keys = self.cumulative_keys(half)
            for b in range(k // 2 + 1):
                for w in self.level_reps[b]:
                    meter.tick()
                    probe = u.mul(w.dagger())
                    if self.coset_key(probe) in target_keys:
                        return k
        return None


_searcher_memo: dict = {}


def _tcount_searcher(n: int) -> CosetSearcher:
    key = ("t", n)
    if key not in _searcher_memo:
        cat = enumerate_clifford_group(n)
        tgates = [
            exact_simulate(make_circuit(n, [make_gate("t", i)])) for i in range(n)
        ]
        _searcher_memo[key] = CosetSearcher(cat, tgates)
    return _searcher_memo[key]


def exact_min_tcount(u: ExactUnitary, budget) -> int | None:
    """Minimal T-count over Clifford+T circuits for an exact unitary, n <= 2."""
    if u.n not in (1, 2):
        raise ValueError("exact T-count search is limited to n in {1, 2}")
    return _tcount_searcher(u.n).min_count(u, budget)


# ---------------------------------------------------------------------------
# independent oracle: naive breadth-first search over full 1-qubit unitaries
# ---------------------------------------------------------------------------


class NaiveTCountOracle:
    """Level sets of all 1-qubit unitaries with T-count <= k, modulo phase.

    Built by plain expansion U -> C T U with no coset quotienting; this is the
    reference the meet-in-the-middle search is validated against.
    """

    def __init__(self):
        self.cat = enumerate_clifford_group(1)
        t = exact_simulate(make_circuit(1, [make_gate("t", 0)]))
        # stack of C.T for every Clifford C
        stack = kernels.ring_mm_batch(self.cat.planes, t.planes)
        ks = (self.cat.ks + t.k).astype(np.int64)
        self._ct, self._ct_ks = kernels.sqrt2_reduce_batch(stack, ks)
        first = {}
        for i in range(len(self.cat)):
            u = self.cat.unitary(i)
            first[u.canonical_bytes()] = (u.planes, u.k)
        self.levels: list[dict] = [first]

    def ensure(self, k: int):
        while len(self.levels) <= k:
            prev = self.levels[-1]
            nxt: dict = {}
            known = set()
            for lvl in self.levels:
                known |= set(lvl)
            for planes, kk in prev.values():
                prod = kernels.ring_mm_batch(self._ct, planes)
                pks = (self._ct_ks + kk).astype(np.int64)
                prod, pks = kernels.sqrt2_reduce_batch(prod, pks)
                flat = phase_canonicalize_batch(prod, pks)
                for i, row in enumerate(flat):
                    key = flat_to_key(row)
                    if key not in known and key not in nxt:
                        nxt[key] = (prod[i].copy(), int(pks[i]))
            self.levels.append(nxt)

    def min_tcount(self, u: ExactUnitary, k_max: int) -> int | None:
        if u.n != 1:
            raise ValueError("naive oracle works on single-qubit unitaries")
        self.ensure(k_max)
        key = u.canonical_bytes()
        for k in range(k_max + 1):
            if key in self.levels[k]:
                return k
        return None


_naive_memo: list = []


def naive_min_tcount(u: ExactUnitary, k_max: int) -> int | None:
    if not _naive_memo:
        _naive_memo.append(NaiveTCountOracle())
    return _naive_memo[0].min_tcount(u, k_max)


# ---------------------------------------------------------------------------
# Hadamard-free group and minimal H-count
# ---------------------------------------------------------------------------


def hfree_generators(n: int) -> list[ExactUnitary]:
    gens = []
    for i in range(n):
        gens.append(exact_simulate(make_circuit(n, [make_gate("t", i)])))
        gens.append(exact_simulate(make_circuit(n, [make_gate("s", i)])))
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(exact_simulate(make_circuit(n, [make_gate("cx", i, j)])))
    return gens


def hfree_closure(n: int) -> UnitaryCatalog:
    """Fixed-point closure of {T_i, S_i, CX_ij} modulo phase; finite for n <= 2."""
    if n not in (1, 2):
        raise ValueError("H-free closure is limited to n in {1, 2}")
    key = ("hfree", n)
    if key not in _searcher_memo:
        _searcher_memo[key] = UnitaryCatalog.closure(n, hfree_generators(n))
    return _searcher_memo[key]


def _hcount_searcher(n: int) -> CosetSearcher:
    key = ("h", n)
    if key not in _searcher_memo:
        cat = hfree_closure(n)
        hgates = [
            exact_simulate(make_circuit(n, [make_gate("h", i)])) for i in range(n)
        ]
        _searcher_memo[key] = CosetSearcher(cat, hgates)
    return _searcher_memo[key]


def exact_min_hcount(u: ExactUnitary, budget) -> int | None:
    """Minimal H-count over the {H, T, CNOT, S} generators, n <= 2."""
    if u.n not in (1, 2):
        raise ValueError("exact H-count search is limited to n in {1, 2}")
    return _hcount_searcher(u.n).min_count(u, budget)


# ---------------------------------------------------------------------------
# reversible circuits: linearity and minimal Toffoli count
# ---------------------------------------------------------------------------

CLASSICAL_KINDS = frozenset({"x", "cx", "ccx"})


def permutation_from_circuit(c: Circuit) -> np.ndarray:
    """Basis-state permutation table of a classical reversible circuit."""
    for g in c.gates:
        if g.kind not in CLASSICAL_KINDS:
            raise ValueError(f"{g.kind} is not a classical reversible gate")
    idx = np.arange(1 << c.wires)
    for g in c.gates:
        if g.kind == "x":
            idx = idx ^ (1 << g.wires[0])
        elif g.kind == "cx":
            cw, t = g.wires
            idx = idx ^ (((idx >> cw) & 1) << t)
        else:
            c1, c2, t = g.wires
            idx = idx ^ ((((idx >> c1) & (idx >> c2)) & 1) << t)
    return idx


def is_linear_reversible(perm) -> bool:
    """True iff perm(x) = A.x xor b over GF(2), checked against all inputs."""
    perm = np.asarray(perm, dtype=np.int64)
    size = len(perm)
    n = size.bit_length() - 1
    if 1 << n != size or sorted(perm) != list(range(size)):
        raise ValueError("not a bijection table on 2^n points")
    b = int(perm[0])
    cols = [int(perm[1 << i]) ^ b for i in range(n)]
    xs = np.arange(size)
    out = np.full(size, b, dtype=np.int64)
    for i in range(n):
        out ^= np.where((xs >> i) & 1 == 1, cols[i], 0)
    return bool(np.array_equal(out, perm))


def _affine_tables(n: int) -> np.ndarray:
    """All affine reversible maps on n bits as permutation tables."""
    size = 1 << n
    xs = np.arange(size)
    mats = []
    for mbits in range(1 << (n * n)):
        rows = [(mbits >> (n * i)) & ((1 << n) - 1) for i in range(n)]
        # invertibility over GF(2) by Gaussian elimination on column masks
        cols = []
        for j in range(n):
            col = 0
            for i in range(n):
                col |= ((rows[i] >> j) & 1) << i
            cols.append(col)
        basis = []
        ok = True
        for c in cols:
            for bvec in basis:
                c = min(c, c ^ bvec)
            if c == 0:
                ok = False
                break
            basis.append(c)
        if ok:
            mats.append(rows)
    tables = []
    for rows in mats:
        ax = np.zeros(size, dtype=np.int64)
        for i in range(n):
            bit = (np.bitwise_count(xs & rows[i]) & 1).astype(np.int64)
            ax |= bit << i
        for b in range(size):
            tables.append(ax ^ b)
    return np.array(tables, dtype=np.int64)


def _ccx_tables(n: int) -> list[np.ndarray]:
    xs = np.arange(1 << n)
    out = []
    for t in range(n):
        controls = [c for c in range(n) if c != t]
        for a in range(len(controls)):
            for b in range(a + 1, len(controls)):
                c1, c2 = controls[a], controls[b]
                out.append(xs ^ ((((xs >> c1) & (xs >> c2)) & 1) << t))
    return out


class TofCountSearcher:
    def __init__(self, n: int):
        if n > 3:
            raise ValueError("Toffoli-count search is limited to n <= 3")
        self.n = n
        self.aff = _affine_tables(n)
        self.aff_keys = {a.tobytes() for a in self.aff}
        self.ccx = _ccx_tables(n)
        # per CCX placement: affine reps D_r with {CCX.A} = union of cosets
        # Aff.(CCX.D_r), one per right coset of K = {D : CCX.D.CCX affine}
        self.reps = [self._stab_reps(c) for c in self.ccx]
        self.levels: list[set[bytes]] | None = None

    def _stab_reps(self, ccx: np.ndarray) -> np.ndarray:
        conj = ccx[self.aff[:, ccx]]  # CCX . A . CCX for every affine A
        in_k = np.array([row.tobytes() in self.aff_keys for row in conj])
        k_tables = self.aff[in_k]
        covered: set[bytes] = set()
        reps = []
        for a in self.aff:
            key = a.tobytes()
            if key in covered:
                continue
            reps.append(a)
            for row in k_tables[:, a]:  # K . a
                covered.add(row.tobytes())
        return np.array(reps, dtype=np.int64)

    def canon(self, perm: np.ndarray) -> bytes:
        comp = self.aff[:, perm]
        return lexmin_row(comp).tobytes()

    def _rep_from_key(self, key: bytes) -> np.ndarray:
        return np.frombuffer(key, dtype=np.int64)

    def build(self, meter: _Meter):
        if self.levels is not None:
            return
        seen = {self.canon(np.arange(1 << self.n))}
        levels = [set(seen)]
        frontier = list(seen)
        while frontier:
            nxt = []
            for key in frontier:
                rep = self._rep_from_key(key)
                for ccx, dreps in zip(self.ccx, self.reps):
                    for row in ccx[dreps[:, rep]]:  # CCX . D_r . rep
                        meter.tick()
                        k2 = self.canon(row)
                        if k2 not in seen:
                            seen.add(k2)
                            nxt.append(k2)
            if not nxt:
                break
            levels.append(set(nxt))
            frontier = nxt
        self.levels = levels

    def min_count(self, perm, budget) -> int | None:
        budget = _as_budget(budget)
        perm = np.asarray(perm, dtype=np.int64)
        if is_linear_reversible(perm):  # also validates the bijection
            return 0
        self.build(_Meter(budget))
        key = self.canon(perm)
        for k, lvl in enumerate(self.levels):
            if key in lvl:
                return k if k <= budget.k_max else None
        return None


def exact_min_tofcount(perm, budget) -> int | None:
    """Minimal CCX count of a reversible permutation over {X, CX, CCX}, n <= 3."""
    perm = np.asarray(perm, dtype=np.int64)
    n = len(perm).bit_length() - 1
    key = ("tof", n)
    if key not in _searcher_memo:
        _searcher_memo[key] = TofCountSearcher(n)
    return _searcher_memo[key].min_count(perm, budget)
