# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled arithmetic kernel; algorithmic twin of _fppy (see its docstring).

Monomial keys stay Python ints (they can exceed 64 bits for many base
variables); coefficients are C integers since p <= 251.
"""

BACKEND_NAME = "compiled"


cdef inline long _mod(long v, long p):
    v = v % p
    if v < 0:
        v += p
    return v


cdef long _inv_mod(long c, long p):
    # Fermat: c^(p-2) mod p, p prime, 0 < c < p.
    cdef long result = 1
    cdef long base = c % p
    cdef long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def mp_add(a, b, long p):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    cdef long s
    for k, c in b.items():
        s = _mod(out.get(k, 0) + c, p)
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def mp_sub(a, b, long p):
    if not b:
        return dict(a)
    out = dict(a)
    cdef long s
    for k, c in b.items():
        s = _mod(out.get(k, 0) - c, p)
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def mp_neg(a, long p):
    out = {}
    cdef long c
    for k, v in a.items():
        c = v
        out[k] = p - c
    return out


def mp_scale(a, long c, long p):
    c = _mod(c, p)
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    out = {}
    cdef long v
    for k, w in a.items():
        v = w
        out[k] = (v * c) % p
    return out


def mp_mul_term(a, key, long c, long p):
    c = _mod(c, p)
    if c == 0 or not a:
        return {}
    out = {}
    cdef long v
    if c == 1:
        for k, w in a.items():
            out[k + key] = w
        return out
    for k, w in a.items():
        v = w
        out[k + key] = (v * c) % p
    return out


def mp_mul(a, b, long p):
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out = {}
    cdef long ca, cb, c
    for kb, vb in b.items():
        cb = vb
        for ka, va in a.items():
            ca = va
            k = ka + kb
            c = _mod(out.get(k, 0) + ca * cb, p)
            if c:
                out[k] = c
            else:
                out.pop(k, None)
    return out


def mp_det2(a, b, c, d, long p):
    out = {}
    cdef long c1, c2, v
    if a and d:
        for k1, w1 in a.items():
            c1 = w1
            for k2, w2 in d.items():
                c2 = w2
                k = k1 + k2
                v = _mod(out.get(k, 0) + c1 * c2, p)
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    if b and c:
        for k1, w1 in b.items():
            c1 = w1
            for k2, w2 in c.items():
                c2 = w2
                k = k1 + k2
                v = _mod(out.get(k, 0) - c1 * c2, p)
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    return out


def mp_divexact(a, b, long p, int width, int nfields):
    if not b:
        raise ZeroDivisionError("mp_divexact by zero")
    if not a:
        return {}
    mask = (1 << width) - 1
    shifts = [width * (nfields - 1 - i) for i in range(1, nfields)]
    kb = max(b)
    cdef long cb_inv = _inv_mod(b[kb], p)
    cdef long cq, v
    rem = dict(a)
    quo = {}
    while rem:
        ka = max(rem)
        kq = ka - kb
        if kq < 0:
            return None
        for s in shifts:
            if ((ka >> s) & mask) < ((kb >> s) & mask):
                return None
        cq = (rem[ka] * cb_inv) % p
        quo[kq] = cq
        for k2, c2 in b.items():
            k = kq + k2
            v = _mod(rem.get(k, 0) - cq * c2, p)
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return quo


def uni_trim(a):
    while a and a[len(a) - 1] == 0:
        a.pop()
    return a


def uni_add(list a, list b, long p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    cdef Py_ssize_t i
    cdef long c
    for i in range(len(b)):
        c = b[i]
        out[i] = (<long> out[i] + c) % p
    return uni_trim(out)


def uni_sub(list a, list b, long p):
    cdef Py_ssize_t n = max(len(a), len(b))
    cdef Py_ssize_t i
    out = [0] * n
    for i in range(len(a)):
        out[i] = a[i]
    cdef long c
    for i in range(len(b)):
        c = b[i]
        out[i] = _mod(<long> out[i] - c, p)
    return uni_trim(out)


def uni_mul(list a, list b, long p):
    if not a or not b:
        return []
    cdef Py_ssize_t na = len(a), nb = len(b)
    out = [0] * (na + nb - 1)
    cdef Py_ssize_t i, j
    cdef long ca, cb
    for i in range(na):
        ca = a[i]
        if ca:
            for j in range(nb):
                cb = b[j]
                out[i + j] = (<long> out[i + j] + ca * cb) % p
    return uni_trim(out)


def uni_divmod(list a, list b, long p):
    if not b:
        raise ZeroDivisionError("uni_divmod by zero")
    r = list(a)
    cdef Py_ssize_t db = len(b) - 1
    cdef long lb_inv = _inv_mod(b[db], p)
    if len(r) - 1 < db:
        return [], uni_trim(r)
    q = [0] * (len(r) - db)
    cdef Py_ssize_t i, j
    cdef long c, f, cb
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            f = (c * lb_inv) % p
            q[i - db] = f
            for j in range(len(b)):
                cb = b[j]
                r[i - db + j] = _mod(<long> r[i - db + j] - f * cb, p)
    return uni_trim(q), uni_trim(r)


def uni_gcd(a, b, long p):
    a = uni_trim(list(a))
    b = uni_trim(list(b))
    while b:
        a, b = b, uni_divmod(a, b, p)[1]
    cdef long inv
    if a and a[len(a) - 1] != 1:
        inv = _inv_mod(a[len(a) - 1], p)
        a = [(<long> c * inv) % p for c in a]
    return a


# ------------------------------------------------------------- dense bivariate

def bi_trim(list g):
    while g and not g[len(g) - 1]:
        g.pop()
    return g


def uni_pow(list a, long n, long p):
    out = [1]
    cdef long i
    for i in range(n):
        out = uni_mul(out, a, p)
    return out


def uni_divexact(list a, list b, long p):
    q, r = uni_divmod(a, b, p)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def bi_content(list g, long p):
    acc = []
    for row in g:
        if row:
            acc = uni_gcd(acc, row, p)
            if len(acc) == 1:
                break
    return acc


def bi_divexact_uni(list g, list u, long p):
    if u == [1]:
        return g
    return [uni_divexact(row, u, p) if row else [] for row in g]


def bi_prem(list f, list g, long p):
    cdef Py_ssize_t dg = len(g) - 1
    cdef Py_ssize_t dr, shift, k
    lg = g[dg]
    cdef long e = len(f) - len(g) + 1
    r = [list(row) for row in f]
    while len(r) > dg:
        dr = len(r) - 1
        lr = r[dr]
        shift = dr - dg
        nxt = []
        for k in range(dr):
            term = uni_mul(lg, r[k], p)
            if shift <= k:
                term = uni_sub(term, uni_mul(lr, g[k - shift], p), p)
            nxt.append(term)
        r = bi_trim(nxt)
        e -= 1
        if not r:
            break
    if e > 0 and r:
        le = uni_pow(lg, e, p)
        r = [uni_mul(row, le, p) if row else [] for row in r]
    return r


def bi_gcd(f, g, long p):
    f = bi_trim([list(row) for row in f])
    g = bi_trim([list(row) for row in g])
    if not f or not g:
        return g or f
    cf = bi_content(f, p)
    cg = bi_content(g, p)
    c = uni_gcd(cf, cg, p)
    f = bi_divexact_uni(f, cf, p)
    g = bi_divexact_uni(g, cg, p)
    if len(f) < len(g):
        f, g = g, f
    if len(g) > 1:
        h = _bi_gcd_modular(f, g, p)
        if h is not None:
            if len(h) == 1 and h[0] == [1]:
                return [c]
            if c != [1]:
                h = [uni_mul(row, c, p) if row else [] for row in h]
            return h
    gfac = [1]
    hfac = [1]
    cdef long delta
    while True:
        if len(g) == 1:
            return [c]
        r = bi_prem(f, g, p)
        if not r:
            pp = bi_divexact_uni(g, bi_content(g, p), p)
            if c != [1]:
                pp = [uni_mul(row, c, p) if row else [] for row in pp]
            return pp
        delta = len(f) - len(g)
        divisor = uni_mul(gfac, uni_pow(hfac, delta, p), p)
        f, g = g, bi_divexact_uni(r, divisor, p)
        gfac = f[len(f) - 1]
        if delta == 1:
            hfac = gfac
        elif delta > 1:
            hfac = uni_divexact(uni_pow(gfac, delta, p), uni_pow(hfac, delta - 1, p), p)


# ------------------------------------------- small extension fields F_(p^k)

_GF_CACHE = {}


def _int_digits(long n, long p, long k):
    out = [0] * k
    cdef long i
    for i in range(k):
        out[i] = n % p
        n //= p
    return out


def _digits_int(digits, long p):
    cdef long n = 0
    for c in reversed(digits):
        n = n * p + <long> c
    return n


def _find_irreducible(long p, long k):
    cdef long tail, d, m
    cdef bint reducible
    for tail in range(p ** k):
        f = _int_digits(tail, p, k) + [1]
        reducible = False
        for d in range(1, k // 2 + 1):
            for m in range(p ** d):
                g = _int_digits(m, p, d) + [1]
                if not uni_divmod(f, g, p)[1]:
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return f
    raise ArithmeticError("no irreducible polynomial found")


def gf_tables(long p, long k):
    key = (p, k)
    hit = _GF_CACHE.get(key)
    if hit:
        return hit
    cdef long q = p ** k
    modulus = _find_irreducible(p, k)

    def gmul(long a, long b):
        pa = uni_trim(_int_digits(a, p, k))
        pb = uni_trim(_int_digits(b, p, k))
        return _digits_int(uni_divmod(uni_mul(pa, pb, p), modulus, p)[1], p)

    exp = None
    cdef long gen, e
    for gen in range(2, q):
        seq = [1]
        e = gmul(1, gen)
        while e != 1:
            seq.append(e)
            e = gmul(e, gen)
        if len(seq) == q - 1:
            exp = seq
            break
    if exp is None:
        raise ArithmeticError("no primitive element found")
    log = [0] * q
    cdef long i
    for i in range(q - 1):
        log[<long> exp[i]] = i
    cdef long a, b, s
    if p == 2:
        add = None
    else:
        add = [0] * (q * q)
        for a in range(q):
            da = _int_digits(a, p, k)
            for b in range(a, q):
                db = _int_digits(b, p, k)
                s = _digits_int([(<long> x + <long> y) % p for x, y in zip(da, db)], p)
                add[a * q + b] = s
                add[b * q + a] = s
    _GF_CACHE[key] = (q, exp, log, add)
    return q, exp, log, add


cdef long _c_gf_eval(list row, long beta, long q, list exp, list log, list add):
    cdef long acc = 0
    cdef long lb = <long> log[beta] if beta else 0
    cdef Py_ssize_t i
    cdef long c
    for i in range(len(row) - 1, -1, -1):
        c = row[i]
        if acc:
            acc = <long> exp[(<long> log[acc] + lb) % (q - 1)] if beta else 0
        if c:
            acc = (acc ^ c) if add is None else <long> add[acc * q + c]
    return acc


cdef inline long _c_gf_neg(long a, long q, list exp, list log, list add):
    if add is None or a == 0:
        return a
    return <long> exp[(<long> log[a] + (q - 1) // 2) % (q - 1)]


cdef list _c_gf_gcd(list a, list b, long q, list exp, list log, list add):
    cdef Py_ssize_t db, da, i, j
    cdef long linv, c, f, lf, bj, t, lc, li
    a = list(a)
    b = list(b)
    while b:
        db = len(b) - 1
        linv = (q - 1 - <long> log[<long> b[db]]) % (q - 1)
        while len(a) - 1 >= db:
            da = len(a) - 1
            c = a[da]
            if c:
                f = <long> exp[(<long> log[c] + linv) % (q - 1)]
                lf = log[f]
                for j in range(db + 1):
                    bj = b[j]
                    if bj:
                        t = <long> exp[(lf + <long> log[bj]) % (q - 1)]
                        i = da - db + j
                        a[i] = (<long> a[i] ^ t) if add is None else <long> add[<long> a[i] * q + _c_gf_neg(t, q, exp, log, add)]
            a.pop()
        while a and a[len(a) - 1] == 0:
            a.pop()
        a, b = b, a
    lc = a[len(a) - 1]
    if lc != 1:
        li = (q - 1 - <long> log[lc]) % (q - 1)
        a = [<long> exp[(<long> log[c2] + li) % (q - 1)] if c2 else 0 for c2 in a]
    return a


cdef list _c_gf_interp(list xs, list ys, long q, list exp, list log, list add):
    cdef Py_ssize_t n = len(xs)
    cdef Py_ssize_t i, j
    cdef long num, den, xv, pv, t
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            if add is None:
                num = <long> coef[i] ^ <long> coef[i - 1]
                den = <long> xs[i] ^ <long> xs[i - j]
            else:
                num = <long> add[<long> coef[i] * q + _c_gf_neg(<long> coef[i - 1], q, exp, log, add)]
                den = <long> add[<long> xs[i] * q + _c_gf_neg(<long> xs[i - j], q, exp, log, add)]
            if num:
                coef[i] = exp[(<long> log[num] + (q - 1 - <long> log[den])) % (q - 1)]
            else:
                coef[i] = 0
    poly = []
    for i in range(n - 1, -1, -1):
        shifted = [0] + poly
        xv = xs[i]
        for j in range(len(poly)):
            pv = poly[j]
            if pv and xv:
                t = <long> exp[(<long> log[pv] + <long> log[xv]) % (q - 1)]
            else:
                t = 0
            if add is None:
                shifted[j] = <long> shifted[j] ^ t
            else:
                shifted[j] = add[<long> shifted[j] * q + _c_gf_neg(t, q, exp, log, add)]
        c = coef[i]
        if c:
            shifted[0] = (<long> shifted[0] ^ <long> c) if add is None else <long> add[<long> shifted[0] * q + <long> c]
        while shifted and shifted[len(shifted) - 1] == 0:
            shifted.pop()
        poly = shifted
    return poly


cdef long _GF_Q_CAP = 512


def _bi_gcd_modular(list f, list g, long p):
    cdef Py_ssize_t dyf = 0, dyg = 0
    for row in f:
        if len(row) - 1 > dyf:
            dyf = len(row) - 1
    for row in g:
        if len(row) - 1 > dyg:
            dyg = len(row) - 1
    lcf = f[len(f) - 1]
    lcg = g[len(g) - 1]
    gamma = uni_gcd(lcf, lcg, p)
    cdef long nbound = (dyf if dyf < dyg else dyg) + len(gamma)
    cdef long needed = nbound + len(lcf) + len(lcg) + 2
    cdef long q = p
    cdef long k = 1
    while q < needed:
        q *= p
        k += 1
    if q > _GF_Q_CAP:
        return None
    q, exp, log, add = gf_tables(p, k)
    cdef Py_ssize_t dmin = len(g)
    cdef long beta, lf, lg, gv, lgv
    cdef Py_ssize_t d, j
    good_x = []
    good_h = []
    for beta in range(q):
        lf = _c_gf_eval(lcf, beta, q, exp, log, add)
        if not lf:
            continue
        lg = _c_gf_eval(lcg, beta, q, exp, log, add)
        if not lg:
            continue
        fb = [_c_gf_eval(row, beta, q, exp, log, add) for row in f]
        gb = [_c_gf_eval(row, beta, q, exp, log, add) for row in g]
        hb = _c_gf_gcd(fb, gb, q, exp, log, add)
        d = len(hb) - 1
        if d == 0:
            return [[1]]
        if d > dmin:
            continue
        if d < dmin:
            dmin = d
            good_x = []
            good_h = []
        gv = _c_gf_eval(gamma, beta, q, exp, log, add)
        lgv = log[gv]
        good_x.append(beta)
        good_h.append([exp[(<long> log[c] + lgv) % (q - 1)] if c else 0 for c in hb])
        if len(good_x) == nbound:
            break
    if len(good_x) < nbound:
        return None
    h = []
    for j in range(dmin + 1):
        row = _c_gf_interp(good_x, [hv[j] for hv in good_h], q, exp, log, add)
        for c in row:
            if <long> c >= p:
                return None
        h.append(row)
    cont = bi_content(h, p)
    if cont != [1]:
        h = bi_divexact_uni(h, cont, p)
    if bi_prem(f, h, p) or bi_prem(g, h, p):
        return None
    return h
