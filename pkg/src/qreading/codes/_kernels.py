"""Compiled inner loops for the three code families.

Field arithmetic here works on raw ints with the doubled antilog table
``exp2`` (length 2*(q-1)+1) and ``log``; zero has no logarithm and is
special-cased everywhere.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def gmul(a, b, exp2, log):
    if a == 0 or b == 0:
        return 0
    return exp2[log[a] + log[b]]


@njit(cache=True, inline="always")
def gdiv(a, b, exp2, log, order):
    if a == 0:
        return 0
    return exp2[log[a] - log[b] + order]


@njit(cache=True, inline="always")
def apow(e, exp2, order):
    return exp2[e % order]


@njit(cache=True)
def berlekamp_massey(S, nsyn, exp2, log, order):
    """Shortest LFSR (error locator) generating S[0..nsyn-1].

    Returns (C, L) with C the connection polynomial, lowest degree first,
    padded to length nsyn + 1.
    """
    # everything runs on logarithms; zero maps to zero_log, and zero_log plus
    # any valid log lands in the zero tail of expz, so no branches are needed
    zero_log = 2 * order
    expz = np.zeros(4 * order + 1, dtype=np.int64)
    expz[: 2 * order - 1] = exp2[: 2 * order - 1]
    logz = np.empty(log.shape[0], dtype=np.int64)
    logz[0] = zero_log
    logz[1:] = log[1:]
    lS = np.empty(nsyn, dtype=np.int64)
    for i in range(nsyn):
        lS[i] = logz[S[i]]
    C = np.zeros(nsyn + 1, dtype=np.int64)
    lC = np.full(nsyn + 1, zero_log, dtype=np.int64)
    lB = np.full(nsyn + 1, zero_log, dtype=np.int64)
    lT = np.full(nsyn + 1, zero_log, dtype=np.int64)
    C[0] = 1
    lC[0] = 0
    lB[0] = 0
    L = 0
    lenB = 1
    m = 1
    lbval = 0
    for n in range(nsyn):
        d = S[n]
        for i in range(1, L + 1):
            d ^= expz[lC[i] + lS[n - i]]
        if d == 0:
            m += 1
            continue
        lcoef = log[d] - lbval + order
        if lcoef >= order:
            lcoef -= order
        top = min(lenB, nsyn + 1 - m)
        lengthen = 2 * L <= n
        if lengthen:
            lT[: L + 1] = lC[: L + 1]
        for j in range(top):
            v = C[j + m] ^ expz[lcoef + lB[j]]
            C[j + m] = v
            lC[j + m] = logz[v]
        if lengthen:
            lB[:lenB] = zero_log
            lB[: L + 1] = lT[: L + 1]
            lenB = L + 1
            L = n + 1 - L
            lbval = log[d]
            m = 1
        else:
            m += 1
    return C, L


@njit(cache=True)
def syndromes_table(r, table, nsyn):
    """Syndromes by XOR of precomputed per-(position, nibble) contributions.

    table[i, h, v] holds the packed syndrome vector of symbol v << 4h at
    position i, 8 one-byte syndromes per uint64 word (fields up to GF(256)).
    """
    n, nnib, _, W = table.shape
    acc = np.zeros(W, dtype=np.uint64)
    for i in range(n):
        v = r[i]
        if v != 0:
            for h in range(nnib):
                nib = (v >> (4 * h)) & 15
                if nib != 0:
                    row = table[i, h, nib]
                    for w in range(W):
                        acc[w] ^= row[w]
    packed = acc.view(np.uint8)
    S = np.empty(nsyn, dtype=np.int64)
    for j in range(nsyn):
        S[j] = packed[j]
    return S


@njit(cache=True)
def chien_search(C, L, n, exp2, log, order):
    """Positions i in [0, n) with C(alpha^-i) = 0; found = -1 on overflow."""
    pos = np.empty(max(L, 1), dtype=np.int64)
    # term j at position i is C_j alpha^(-ij); walk each term's exponent
    cur = np.empty(L + 1, dtype=np.int64)
    step = np.empty(L + 1, dtype=np.int64)
    nz = 0
    for j in range(1, L + 1):
        if C[j] != 0:
            cur[nz] = log[C[j]]
            step[nz] = (order - j % order) % order
            nz += 1
    found = 0
    for i in range(n):
        acc = C[0]
        for t in range(nz):
            acc ^= exp2[cur[t]]
            e = cur[t] + step[t]
            if e >= order:
                e -= order
            cur[t] = e
        if acc == 0:
            if found == L:
                return pos, -1
            pos[found] = i
            found += 1
    return pos, found


@njit(cache=True)
def _eval_log_walk(coeffs, ncoef, x_log, exp2, log, order):
    """sum_j coeffs[j] * alpha^(x_log * j)."""
    acc = 0
    e = 0
    for j in range(ncoef):
        c = coeffs[j]
        if c != 0:
            acc ^= exp2[log[c] + e]
        e += x_log
        if e >= order:
            e -= order
    return acc


@njit(cache=True)
def syndromes_symbols(r, b, nsyn, exp2, log, order):
    """S_j = r(alpha^(b+j)) for j < nsyn, r given as field symbols."""
    S = np.zeros(nsyn, dtype=np.int64)
    n = r.shape[0]
    bb = b % order
    for i in range(n):
        if r[i] != 0:
            step = i % order
            e = (log[r[i]] + step * bb) % order
            for j in range(nsyn):
                S[j] ^= exp2[e]
                e += step
                if e >= order:
                    e -= order
    return S


@njit(cache=True)
def syndromes_bits(r, b, nsyn, exp2, order):
    S = np.zeros(nsyn, dtype=np.int64)
    n = r.shape[0]
    bb = b % order
    for i in range(n):
        if r[i] != 0:
            step = i % order
            e = (step * bb) % order
            for j in range(nsyn):
                S[j] ^= exp2[e]
                e += step
                if e >= order:
                    e -= order
    return S


@njit(cache=True)
def _rs_coefficients(v, k, b, exp2, log, order):
    """Recover f (deg < k) from twisted evaluations v_i = alpha^(i(1-b)) f(alpha^i)."""
    n = v.shape[0]
    f = np.zeros(k, dtype=np.int64)
    tw = (1 - b) % order
    for i in range(n):
        if v[i] != 0:
            e = (log[v[i]] - (i * tw) % order + order) % order
            step = (order - i % order) % order
            for l in range(k):
                f[l] ^= exp2[e]
                e += step
                if e >= order:
                    e -= order
    return f


@njit(cache=True)
def rs_encode_symbols(f, n, b, exp2, log, order):
    c = np.zeros(n, dtype=np.int64)
    k = f.shape[0]
    for l in range(k):
        if f[l] != 0:
            # contribution f_l alpha^(i(l+1-b)) at position i
            step = (l + 1 - b) % order
            e = log[f[l]]
            for i in range(n):
                c[i] ^= exp2[e]
                e += step
                if e >= order:
                    e -= order
    return c


@njit(cache=True)
def rs_decode_symbols(r, k, b, exp2, log, order, table):
    """Correct up to (n-k)//2 symbol errors and return (f, ok).

    ``table`` is the syndrome lookup from ``syndrome_lookup`` or an empty
    array to compute syndromes directly.  On failure f is read straight off
    the uncorrected word.
    """
    n = r.shape[0]
    nsyn = n - k
    if nsyn == 0:
        return _rs_coefficients(r, k, b, exp2, log, order), True
    if table.shape[0] == n:
        S = syndromes_table(r, table, nsyn)
    else:
        S = syndromes_symbols(r, b, nsyn, exp2, log, order)
    clean = True
    for j in range(nsyn):
        if S[j] != 0:
            clean = False
            break
    if clean:
        return _rs_coefficients(r, k, b, exp2, log, order), True
    C, L = berlekamp_massey(S, nsyn, exp2, log, order)
    if 2 * L > nsyn:
        return _rs_coefficients(r, k, b, exp2, log, order), False
    pos, found = chien_search(C, L, n, exp2, log, order)
    if found != L:
        return _rs_coefficients(r, k, b, exp2, log, order), False
    # Omega = S * Lambda mod x^nsyn; L distinct roots with L <= t make deg Omega < L
    omega = np.zeros(L, dtype=np.int64)
    for j in range(L):
        cj = C[j]
        if cj != 0:
            lc = log[cj]
            for i in range(L - j):
                if S[i] != 0:
                    omega[i + j] ^= exp2[lc + log[S[i]]]
    # formal derivative of Lambda: odd terms shifted down
    dlam = np.zeros(L + 1, dtype=np.int64)
    for j in range(1, L + 1, 2):
        dlam[j - 1] = C[j]
    c = r.copy()
    tw = (1 - b) % order
    for idx in range(found):
        p = pos[idx]
        xinv = (order - p % order) % order
        num = _eval_log_walk(omega, L, xinv, exp2, log, order)
        den = _eval_log_walk(dlam, L + 1, xinv, exp2, log, order)
        if den == 0 or num == 0:
            return _rs_coefficients(r, k, b, exp2, log, order), False
        e = log[num] - log[den] + order + (p * tw) % order
        c[p] ^= exp2[e % order]
    return _rs_coefficients(c, k, b, exp2, log, order), True


@njit(cache=True)
def binary_encode(info, G):
    k, n = G.shape
    c = np.zeros(n, dtype=np.uint8)
    for i in range(k):
        if info[i]:
            for j in range(n):
                c[j] ^= G[i, j]
    return c


@njit(cache=True)
def bch_decode_bits(r, t, b, info_pos, exp2, log, order):
    """Bounded-distance decode of a binary BCH word; returns (info, ok)."""
    n = r.shape[0]
    nsyn = 2 * t
    c = r.copy()
    ok = True
    if nsyn > 0:
        S = syndromes_bits(r, b, nsyn, exp2, order)
        clean = True
        for j in range(nsyn):
            if S[j] != 0:
                clean = False
                break
        if not clean:
            C, L = berlekamp_massey(S, nsyn, exp2, log, order)
            if L > t:
                ok = False
            else:
                pos, found = chien_search(C, L, n, exp2, log, order)
                if found != L:
                    ok = False
                else:
                    for idx in range(found):
                        c[pos[idx]] ^= 1
    if not ok:
        c = r
    k = info_pos.shape[0]
    info = np.empty(k, dtype=np.uint8)
    for i in range(k):
        info[i] = c[info_pos[i]]
    return info, ok


@njit(cache=True)
def rm_decode_bits(r, G, degrees, vote_idx):
    """Reed majority-logic decoding, highest degree first; ties vote 0."""
    k, n = G.shape
    y = r.copy()
    info = np.zeros(k, dtype=np.uint8)
    row = k - 1
    while row >= 0:
        d = degrees[row]
        first = row
        while first > 0 and degrees[first - 1] == d:
            first -= 1
        width = 1 << d
        nchecks = n // width
        for mono in range(first, row + 1):
            ones = 0
            for cidx in range(nchecks):
                acc = 0
                for j in range(width):
                    acc ^= y[vote_idx[mono, cidx * width + j]]
                ones += acc
            if 2 * ones > nchecks:
                info[mono] = 1
        for mono in range(first, row + 1):
            if info[mono]:
                for j in range(n):
                    y[j] ^= G[mono, j]
        row = first - 1
    return info
