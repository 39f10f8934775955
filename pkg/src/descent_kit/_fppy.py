"""Pure-Python arithmetic kernel.

Shared data model with the compiled twin (_fpcore.pyx):

* sparse multivariate polynomials over F_p are dicts mapping a packed monomial
  key (int) to a coefficient in 1..p-1; zero coefficients are never stored and
  the zero polynomial is the empty dict;
* packed keys hold nfields bit-fields of `width` bits, most significant field
  first: field 0 is the total degree, fields 1..r the per-variable exponents.
  Integer comparison of keys is then exactly graded-lex comparison, and
  monomial multiplication is integer addition of keys;
* dense univariate polynomials over F_p are lists of coefficients by ascending
  degree with no trailing zeros; [] is the zero polynomial.

Both backends must produce identical results bit for bit.
"""

BACKEND_NAME = "pure-python"


# ------------------------------------------------------------------ sparse ops

def mp_add(a, b, p):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for k, c in b.items():
        s = (out.get(k, 0) + c) % p
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def mp_sub(a, b, p):
    if not b:
        return dict(a)
    out = dict(a)
    for k, c in b.items():
        s = (out.get(k, 0) - c) % p
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def mp_neg(a, p):
    return {k: p - c for k, c in a.items()}


def mp_scale(a, c, p):
    c %= p
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    return {k: v * c % p for k, v in a.items()}


def mp_mul_term(a, key, c, p):
    """a * (c * x^key)."""
    c %= p
    if c == 0 or not a:
        return {}
    if c == 1:
        return {k + key: v for k, v in a.items()}
    return {k + key: v * c % p for k, v in a.items()}


def mp_mul(a, b, p):
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out = {}
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            c = (out.get(k, 0) + ca * cb) % p
            if c:
                out[k] = c
            else:
                out.pop(k, None)
    return out


def mp_det2(a, b, c, d, p):
    """a*d - b*c in one accumulation (the Bareiss inner step)."""
    out = {}
    if a and d:
        for k1, c1 in a.items():
            for k2, c2 in d.items():
                k = k1 + k2
                v = (out.get(k, 0) + c1 * c2) % p
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    if b and c:
        for k1, c1 in b.items():
            for k2, c2 in c.items():
                k = k1 + k2
                v = (out.get(k, 0) - c1 * c2) % p
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    return out


def mp_divexact(a, b, p, width, nfields):
    """Exact division a / b, or None when b does not divide a.

    Classic leading-term elimination under graded-lex; the per-variable
    divisibility check skips field 0 because the degree field can never
    borrow when no variable field does.
    """
    if not b:
        raise ZeroDivisionError("mp_divexact by zero")
    if not a:
        return {}
    mask = (1 << width) - 1
    shifts = [width * (nfields - 1 - i) for i in range(1, nfields)]
    kb = max(b)
    cb_inv = pow(b[kb], p - 2, p)
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
        cq = rem[ka] * cb_inv % p
        quo[kq] = cq
        for k2, c2 in b.items():
            k = kq + k2
            v = (rem.get(k, 0) - cq * c2) % p
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return quo


# ------------------------------------------------------------- dense univariate

def uni_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def uni_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return uni_trim(out)


def uni_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return uni_trim(out)


def uni_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return uni_trim(out)


def uni_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("uni_divmod by zero")
    r = list(a)
    db = len(b) - 1
    lb_inv = pow(b[-1], p - 2, p)
    if len(r) - 1 < db:
        return [], uni_trim(r)
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            f = c * lb_inv % p
            q[i - db] = f
            for j, cb in enumerate(b):
                r[i - db + j] = (r[i - db + j] - f * cb) % p
    return uni_trim(q), uni_trim(r)


def uni_gcd(a, b, p):
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) is []."""
    a = uni_trim(list(a))
    b = uni_trim(list(b))
    while b:
        a, b = b, uni_divmod(a, b, p)[1]
    if a and a[-1] != 1:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


# ------------------------------------------------------------- dense bivariate

# A bivariate polynomial is a list of rows: grid[i] is the dense coefficient
# list (in the inner variable) of outer**i.  Rows may be [] (zero); the top
# row of a nonzero grid is nonzero.

def bi_trim(g):
    while g and not g[-1]:
        g.pop()
    return g


def uni_pow(a, n, p):
    out = [1]
    for _ in range(n):
        out = uni_mul(out, a, p)
    return out


def uni_divexact(a, b, p):
    q, r = uni_divmod(a, b, p)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def bi_content(g, p):
    """Monic gcd of the rows of a nonzero grid."""
    acc = []
    for row in g:
        if row:
            acc = uni_gcd(acc, row, p)
            if len(acc) == 1:
                break
    return acc


def bi_divexact_uni(g, u, p):
    """Divide every row by the univariate u (must be exact)."""
    if u == [1]:
        return g
    return [uni_divexact(row, u, p) if row else [] for row in g]


def bi_prem(f, g, p):
    """Pseudo-remainder of f by g in the outer variable: lc(g)^(df-dg+1) * f mod g."""
    dg = len(g) - 1
    lg = g[-1]
    e = len(f) - len(g) + 1
    r = [list(row) for row in f]
    while len(r) > dg:
        dr = len(r) - 1
        lr = r[-1]
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


def bi_gcd(f, g, p):
    """Gcd of two nonzero grids by the subresultant remainder sequence."""
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
        gfac = f[-1]
        if delta == 1:
            hfac = gfac
        elif delta > 1:
            hfac = uni_divexact(uni_pow(gfac, delta, p), uni_pow(hfac, delta - 1, p), p)


# ------------------------------------------- small extension fields F_(p^k)

# Element encoding: an int in [0, p^k) whose base-p digits are the
# coefficients of a residue mod a fixed irreducible polynomial.  Prime-field
# elements keep their usual value.  Multiplication goes through discrete
# log/exp tables; addition is digitwise (XOR when p = 2).

_GF_CACHE = {}


def _int_digits(n, p, k):
    out = [0] * k
    for i in range(k):
        out[i] = n % p
        n //= p
    return out


def _digits_int(digits, p):
    n = 0
    for c in reversed(digits):
        n = n * p + c
    return n


def _find_irreducible(p, k):
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


def gf_tables(p, k):
    """(q, exp, log, add) for F_(p^k); add is None when p == 2 (use xor)."""
    key = (p, k)
    hit = _GF_CACHE.get(key)
    if hit:
        return hit
    q = p ** k
    modulus = _find_irreducible(p, k)

    def gmul(a, b):
        pa = uni_trim(_int_digits(a, p, k))
        pb = uni_trim(_int_digits(b, p, k))
        return _digits_int(uni_divmod(uni_mul(pa, pb, p), modulus, p)[1], p)

    exp = None
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
    for i, v in enumerate(exp):
        log[v] = i
    if p == 2:
        add = None
    else:
        add = [0] * (q * q)
        for a in range(q):
            da = _int_digits(a, p, k)
            for b in range(a, q):
                db = _int_digits(b, p, k)
                s = _digits_int([(x + y) % p for x, y in zip(da, db)], p)
                add[a * q + b] = s
                add[b * q + a] = s
    _GF_CACHE[key] = (q, exp, log, add)
    return q, exp, log, add


def _gf_eval(row, beta, q, exp, log, add):
    """Evaluate an F_p coefficient list at beta by Horner's rule."""
    acc = 0
    lb = log[beta] if beta else 0
    for c in reversed(row):
        if acc:
            acc = exp[(log[acc] + lb) % (q - 1)] if beta else 0
        if c:
            acc = (acc ^ c) if add is None else add[acc * q + c]
    return acc


def _gf_gcd(a, b, q, exp, log, add):
    """Monic gcd of coefficient lists over F_(p^k)."""
    a = list(a)
    b = list(b)
    while b:
        db = len(b) - 1
        linv = (q - 1 - log[b[db]]) % (q - 1)
        while len(a) - 1 >= db:
            da = len(a) - 1
            c = a[da]
            if c:
                f = exp[(log[c] + linv) % (q - 1)]
                lf = log[f]
                for j in range(db + 1):
                    bj = b[j]
                    if bj:
                        t = exp[(lf + log[bj]) % (q - 1)]
                        i = da - db + j
                        a[i] = (a[i] ^ t) if add is None else add[a[i] * q + _gf_neg(t, q, exp, log, add)]
            a.pop()
        while a and a[-1] == 0:
            a.pop()
        a, b = b, a
    lc = a[-1]
    if lc != 1:
        li = (q - 1 - log[lc]) % (q - 1)
        a = [exp[(log[c] + li) % (q - 1)] if c else 0 for c in a]
    return a


def _gf_neg(a, q, exp, log, add):
    if add is None or a == 0:
        return a
    # -1 = exp[(q-1)/2] has order 2; scaling by it negates
    half = (q - 1) // 2
    return exp[(log[a] + half) % (q - 1)]


def _gf_interp(xs, ys, q, exp, log, add):
    """Newton interpolation; returns the coefficient list over F_(p^k)."""
    n = len(xs)
    coef = list(ys)

    def sub(a, b):
        if add is None:
            return a ^ b
        return add[a * q + _gf_neg(b, q, exp, log, add)]

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        return exp[(log[a] + log[b]) % (q - 1)]

    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            num = sub(coef[i], coef[i - 1])
            den = sub(xs[i], xs[i - j])
            coef[i] = mul(num, exp[(q - 1 - log[den]) % (q - 1)]) if num else 0
    poly = []
    for i in range(n - 1, -1, -1):
        # poly = poly*(y - xs[i]) + coef[i]
        shifted = [0] + poly
        for j in range(len(poly)):
            shifted[j] = sub(shifted[j], mul(poly[j], xs[i]))
        if coef[i]:
            shifted[0] = (shifted[0] ^ coef[i]) if add is None else add[shifted[0] * q + coef[i]]
        while shifted and shifted[-1] == 0:
            shifted.pop()
        poly = shifted
    return poly


_GF_Q_CAP = 512


def _bi_gcd_modular(f, g, p):
    """Primitive gcd of content-free grids by evaluation and interpolation.
    Returns None when the prime power budget or a luck check fails."""
    dyf = max(len(r) for r in f) - 1
    dyg = max(len(r) for r in g) - 1
    lcf = f[-1]
    lcg = g[-1]
    gamma = uni_gcd(lcf, lcg, p)
    nbound = min(dyf, dyg) + len(gamma)
    needed = nbound + len(lcf) + len(lcg) + 2
    q = p
    k = 1
    while q < needed:
        q *= p
        k += 1
    if q > _GF_Q_CAP:
        return None
    q, exp, log, add = gf_tables(p, k)
    dmin = len(g)
    good_x = []
    good_h = []
    for beta in range(q):
        lf = _gf_eval(lcf, beta, q, exp, log, add)
        if not lf:
            continue
        lg = _gf_eval(lcg, beta, q, exp, log, add)
        if not lg:
            continue
        fb = [_gf_eval(row, beta, q, exp, log, add) for row in f]
        gb = [_gf_eval(row, beta, q, exp, log, add) for row in g]
        hb = _gf_gcd(fb, gb, q, exp, log, add)
        d = len(hb) - 1
        if d == 0:
            return [[1]]
        if d > dmin:
            continue
        if d < dmin:
            dmin = d
            good_x = []
            good_h = []
        gv = _gf_eval(gamma, beta, q, exp, log, add)
        lgv = log[gv]
        good_x.append(beta)
        good_h.append([exp[(log[c] + lgv) % (q - 1)] if c else 0 for c in hb])
        if len(good_x) == nbound:
            break
    if len(good_x) < nbound:
        return None
    h = []
    for j in range(dmin + 1):
        row = _gf_interp(good_x, [hv[j] for hv in good_h], q, exp, log, add)
        if any(c >= p for c in row):
            return None
        h.append(row)
    cont = bi_content(h, p)
    if cont != [1]:
        h = bi_divexact_uni(h, cont, p)
    if bi_prem(f, h, p) or bi_prem(g, h, p):
        return None
    return h
