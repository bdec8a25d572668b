"""Accumulating remainder trees over 2x2 integer matrices.

Given matrices A_0..A_{b-1} and moduli p_0..p_{b-1} (p_0 = 1), computes
every prefix product A_0 ... A_{n-1} mod p_n in quasilinear total bit
complexity: one bottom-up product tree for the moduli, one for the
matrices, then a top-down pass that reduces accumulated prefixes modulo
the subtree moduli.  A spacing variant places each modulus at an arbitrary
cut point, and a forest variant splits the index range into chunks that
carry a reduced prefix between them to bound peak memory.

Matrix entries are gmpy2.mpz internally; product-tree nodes are reduced
against the full modulus product once they outgrow it, which keeps every
node at most the total modulus size without changing any requested output.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from gmpy2 import mpz

_ONE = mpz(1)


class TriMat(NamedTuple):
    """Row-major 2x2 integer matrix.

    Products of lower-triangular matrices (m12 = 0) stay lower-triangular;
    multiplication takes the cheap path in that case.
    """

    m11: int
    m12: int
    m21: int
    m22: int

    @property
    def is_lower_triangular(self) -> bool:
        return self.m12 == 0


IDENTITY = TriMat(1, 0, 0, 1)
ZERO = TriMat(0, 0, 0, 0)

_MID = TriMat(_ONE, mpz(0), mpz(0), _ONE)
_MZERO = TriMat(mpz(0), mpz(0), mpz(0), mpz(0))


def mat_mul(x: TriMat, y: TriMat) -> TriMat:
    if x[1] == 0 == y[1]:
        return TriMat(x[0] * y[0], 0, x[2] * y[0] + x[3] * y[2], x[3] * y[3])
    return TriMat(
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def mat_mod(x: TriMat, m: int) -> TriMat:
    return TriMat(x[0] % m, x[1] % m, x[2] % m, x[3] % m)


def _to_mpz(mat: TriMat) -> TriMat:
    return TriMat(mpz(mat[0]), mpz(mat[1]), mpz(mat[2]), mpz(mat[3]))


def _to_int(mat: TriMat) -> TriMat:
    return TriMat(int(mat[0]), int(mat[1]), int(mat[2]), int(mat[3]))


def _rem_tree_raw(mats: list[TriMat], mods: list) -> list[TriMat]:
    """Core tree on equal-length lists; returns the leaf-level prefixes.

    Output[j] = A_0 ... A_{j-1} mod mods[j]; entries at unit moduli are the
    zero matrix.  The final slot's matrix never enters a requested prefix
    and is zeroed to keep the right spine of the product tree trivial.
    """
    b = len(mats)
    if b == 0:
        return []
    size = 1 if b <= 1 else 1 << (b - 1).bit_length()
    mats = list(mats) + [_MZERO] * (size - b)
    mats[-1] = _MZERO
    mods = [mpz(m) for m in mods] + [_ONE] * (size - b)
    if size == 1:
        return [_MID]

    m_levels = [mods]
    while len(m_levels[-1]) > 1:
        cur = m_levels[-1]
        m_levels.append([cur[j] * cur[j + 1] for j in range(0, len(cur), 2)])
    total = m_levels[-1][0]
    cap_bits = total.bit_length() + 64

    a_levels = [mats]
    while len(a_levels[-1]) > 2:
        cur = a_levels[-1]
        nxt = []
        for j in range(0, len(cur), 2):
            prod = mat_mul(cur[j], cur[j + 1])
            if prod[0].bit_length() > cap_bits or prod[3].bit_length() > cap_bits:
                prod = mat_mod(prod, total)
            nxt.append(prod)
        a_levels.append(nxt)

    prefixes = [_MID]
    for level in range(len(m_levels) - 2, -1, -1):
        mods_l = m_levels[level]
        mats_l = a_levels[level]
        nxt = []
        for j, m in enumerate(mods_l):
            if m == 1:
                nxt.append(_MZERO)
                continue
            parent = prefixes[j >> 1]
            val = mat_mul(parent, mats_l[j - 1]) if j & 1 else parent
            nxt.append(mat_mod(val, m))
        prefixes = nxt
    return prefixes[:b]


def rem_tree(matrices: Sequence[TriMat], moduli: Sequence[int]) -> list[TriMat]:
    """All prefix products of ``matrices`` modulo the aligned ``moduli``.

    Output[n] = A_0 ... A_{n-1} mod moduli[n] for 1 <= n < b; output[0] is
    the identity.  The moduli must be pairwise coprime with moduli[0] = 1;
    both lists are padded to a power of two internally (zero matrices,
    unit moduli).
    """
    if len(matrices) != len(moduli):
        raise ValueError("matrices and moduli must have equal length")
    if not matrices:
        return []
    if any(m == 0 for m in moduli):
        raise ValueError("moduli must be nonzero")
    if moduli[0] != 1:
        raise ValueError("modulus at index 0 must be 1")
    raw = _rem_tree_raw([_to_mpz(m) for m in matrices], list(moduli))
    out = [_to_int(m) for m in raw]
    out[0] = IDENTITY
    return out


def _spacing_raw(mats: list[TriMat], requests: list[tuple]) -> dict:
    """Prefix products at per-modulus cut points.

    ``requests`` holds (key, modulus, cut) with 1 <= cut <= len(mats);
    repeated cuts share a slot via the product of their moduli and are
    split back by reduction.  Returns {key: A_0 ... A_{cut-1} mod modulus}.
    """
    n = len(mats)
    mods = [_ONE] * (n + 1)
    for _, q, cut in requests:
        mods[cut] = mods[cut] * q
    raw = _rem_tree_raw(mats + [_MZERO], mods)
    return {key: mat_mod(raw[cut], q) for key, q, cut in requests}


def _validate_cuts(matrices, primes, cuts):
    if len(primes) != len(cuts):
        raise ValueError("primes and cuts must have equal length")
    n = len(matrices)
    for cut in cuts:
        if not 0 <= cut <= n:
            raise ValueError(f"cut {cut} out of range [0, {n}]")


def rem_tree_with_spacing(
    matrices: Sequence[TriMat], primes: Sequence[int], cuts: Sequence[int]
) -> list[TriMat]:
    """Prefix products A_0 ... A_{cuts[i]-1} mod primes[i], aligned with ``primes``.

    A cut of 0 yields the identity matrix (reduced mod that prime).  The
    primes must be distinct; two primes may share a cut point.
    """
    _validate_cuts(matrices, primes, cuts)
    results: list[TriMat | None] = [None] * len(primes)
    requests = []
    for idx, (q, cut) in enumerate(zip(primes, cuts)):
        if cut == 0:
            results[idx] = mat_mod(IDENTITY, q)
        else:
            requests.append((idx, mpz(q), cut))
    if requests:
        found = _spacing_raw([_to_mpz(m) for m in matrices], requests)
        for idx, _, _ in requests:
            results[idx] = _to_int(found[idx])
    return results


def rem_forest(
    matrices: Sequence[TriMat],
    primes: Sequence[int],
    cuts: Sequence[int],
    forest_width: int = 1,
) -> list[TriMat]:
    """Same contract as :func:`rem_tree_with_spacing`, split into chunks.

    The index range is cut into up to ``forest_width`` contiguous chunks;
    each chunk runs its own spacing tree and hands the next chunk the
    accumulated prefix reduced modulo the product of all later moduli.
    Output is identical to a single tree; peak memory scales with the
    largest chunk.
    """
    if forest_width < 1:
        raise ValueError("forest_width must be at least 1")
    _validate_cuts(matrices, primes, cuts)
    results: list[TriMat | None] = [None] * len(primes)
    order = sorted(range(len(primes)), key=lambda i: cuts[i])
    positive = []
    for i in order:
        if cuts[i] == 0:
            results[i] = mat_mod(IDENTITY, primes[i])
        else:
            positive.append(i)
    if not positive:
        return results
    width = min(forest_width, len(positive))
    if width == 1:
        single = rem_tree_with_spacing(matrices, primes, cuts)
        for i in positive:
            results[i] = single[i]
        return results

    # contiguous groups of ~equal prime count, never splitting a shared cut
    per = -(-len(positive) // width)
    groups: list[list[int]] = []
    pos = 0
    while pos < len(positive):
        end = min(pos + per, len(positive))
        while end < len(positive) and cuts[positive[end]] == cuts[positive[end - 1]]:
            end += 1
        groups.append(positive[pos:end])
        pos = end

    suffix = [_ONE] * (len(groups) + 1)
    for w in range(len(groups) - 1, -1, -1):
        prod = suffix[w + 1]
        for i in groups[w]:
            prod = prod * primes[i]
        suffix[w] = prod

    carry = _MID
    t_prev = 0
    virtual = object()
    for w, grp in enumerate(groups):
        t_w = max(cuts[i] for i in grp)
        local = [_to_mpz(matrices[k]) for k in range(t_prev, t_w)]
        requests = [(i, mpz(primes[i]), cuts[i] - t_prev) for i in grp]
        m_next = suffix[w + 1]
        if m_next > 1:
            requests.append((virtual, m_next, t_w - t_prev))
        found = _spacing_raw(local, requests)
        for i in grp:
            results[i] = _to_int(mat_mod(mat_mul(carry, found[i]), primes[i]))
        if m_next > 1:
            carry = mat_mod(mat_mul(carry, found[virtual]), m_next)
        t_prev = t_w
    return results
