"""Left and right sides of every registered identity, written against a backend.

Each builder takes a backend ``B`` and reads its parameters with
``B.param``.  Sums pass a lower weight bound per index; under the numeric
backend the bound is ignored and the tail policy decides when to stop.
Nested sums wrap their inner parts in ``B.scaled`` so the formal backend can
lower the working order by the valuation of the outer prefactor.
"""

from __future__ import annotations

from ..sigma import sigma_c_expr, sigma_cd_expr, sigma_expr, tri


def _pr(B, nums, dens, step=1):
    return B.pinf_ratio(nums, dens, step)


def _pochs(B, xs, n, step=1):
    return B.prod([B.poch(x, n, step) for x in xs])


def _one_minus_inv(B, z):
    return 1 - B.inv(z)


# -- classical identities ------------------------------------------------------------------
def qbin_lhs(B):
    return B.phi([B.param("a")], [], B.param("z"))


def qbin_rhs(B):
    a, z = B.param("a"), B.param("z")
    return _pr(B, [a * z], [z])


def phi21_lhs(B):
    a, b, c, t = (B.param(k) for k in "abct")
    return B.phi([a, b], [c], t)


def heine_rhs(B):
    # (c/b)_n b^n is expanded as prod (b - c q^k) so b may be formal
    a, b, c, t = (B.param(k) for k in "abct")
    q = B.q
    at = a * t

    def term(n):
        expanded = B.prod([b - c * B.qpow(k) for k in range(n)])
        return B.scaled(expanded, lambda: B.poch(t, n) * B.inv(B.poch(q, n) * B.poch(at, n)))

    return _pr(B, [b, at], [c, t]) * B.qsum(term, lambda n: n)


def heine2_rhs(B):
    # (abt/c)_n (c/b)^n is expanded as prod (c/b - a t q^k) so c may be formal
    a, b, c, t = (B.param(k) for k in "abct")
    q = B.q
    cb = c * B.inv(b)
    bt = b * t
    at = a * t

    def term(n):
        expanded = B.prod([cb - at * B.qpow(k) for k in range(n)])
        return B.scaled(expanded, lambda: B.poch(b, n) * B.inv(B.poch(q, n) * B.poch(bt, n)))

    return _pr(B, [cb, bt], [c, t]) * B.qsum(term, lambda n: n)


def fine_lhs(B):
    b, t = B.param("b"), B.param("t")
    bq = b * B.q
    return B.qsum(lambda n: B.scaled(t ** n, lambda: B.inv(B.poch(bq, n))), lambda n: n)


def fine_rhs(B):
    b, t = B.param("b"), B.param("t")
    q = B.q

    def term(n):
        return B.scaled((-t) ** n * B.qpow(tri(n)),
                        lambda: B.inv(B.poch(q, n) * (1 - b * B.qpow(n))))

    return (1 - b) * B.inv(B.pinf(t)) * B.qsum(term, lambda n: n + tri(n))


def euler_lhs(B):
    w = B.param("w")
    q = B.q
    return B.qsum(lambda n: B.scaled(w ** n * B.qpow(n * (n - 1) // 2),
                                     lambda: B.inv(B.poch(q, n))),
                  lambda n: n + n * (n - 1) // 2)


def euler_rhs(B):
    return B.pinf(-B.param("w"))


def lebesgue_lhs(B):
    a = B.param("a")
    q = B.q
    return B.qsum(lambda n: B.scaled(B.qpow(tri(n)),
                                     lambda: B.poch(a, n) * B.inv(B.poch(q, n))), tri)


def lebesgue_rhs(B):
    a = B.param("a")
    return B.pinf(-B.q) * B.pinf(a * B.q, 2)


def _triple_product_index(i: int) -> int:
    return (i + 1) // 2 if i % 2 else -(i // 2)


def triple_product_lhs(B):
    z = B.param("z")
    zinv = B.inv(z)

    def term(i):
        n = _triple_product_index(i)
        zn = z ** n if n >= 0 else zinv ** (-n)
        return zn * B.qpow(n * n)

    return B.qsum(term, lambda i: _triple_product_index(i) ** 2)


def triple_product_rhs(B):
    z = B.param("z")
    q = B.q
    return B.pinf(q * q, 2) * B.pinf(-z * q, 2) * B.pinf(-q * B.inv(z), 2)


# -- sum-of-tails identities ------------------------------------------------------------
def s_expr(B):
    return B.pinf(-B.q)


def d_expr(B, step=1):
    def term(n):
        e = n * step
        return B.scaled(B.qpow(e), lambda: B.inv(1 - B.qpow(e)))

    return B.qsum(term, lambda n: n * step, 1) - B.const(1) / 2


def tails_plus_lhs(B):
    S = s_expr(B)
    mq = -B.q
    return B.qsum(lambda n: S - B.poch(mq, n), lambda n: n + 1)


def tails_plus_rhs(B):
    return s_expr(B) * d_expr(B) + sigma_expr(B) / 2


def tails_odd_lhs(B):
    S = s_expr(B)
    q = B.q
    return B.qsum(lambda n: S - B.inv(B.poch(q, n + 1, 2)), lambda n: 2 * n + 3)


def tails_odd_rhs(B):
    return s_expr(B) * d_expr(B, 2) + sigma_expr(B) / 2


# -- reciprocity theorems ------------------------------------------------------------------
def rho3_expr(B, a, b, c):
    """(1 + 1/b) sum (c)_n (-1)^n q^{n(n+1)/2} a^n b^-n / ((-aq)_n (-c/b)_{n+1})."""
    binv = B.inv(b)
    ab = a * binv
    maq = -a * B.q
    mcb = -c * binv

    def term(n):
        pref = ab ** n * B.qpow(tri(n)) * (-1 if n % 2 else 1)
        return B.scaled(pref, lambda: B.poch(c, n)
                        * B.inv(B.poch(maq, n) * B.poch(mcb, n + 1)))

    return (1 + binv) * B.qsum(term, tri)


def rho4_expr(B, a, b, c, d):
    binv = B.inv(b)
    ab = a * binv
    maq = -a * B.q
    cd = c * d
    cdab = cd * B.inv(a * b)
    mcb = -c * binv
    mdb = -d * binv

    def term(n):
        pref = ab ** n * B.qpow(tri(n)) * (-1 if n % 2 else 1)
        return B.scaled(pref, lambda: _pochs(B, [d, c, cdab], n)
                        * (1 + cd * B.qpow(2 * n) * binv)
                        * B.inv(B.poch(maq, n) * B.poch(mcb, n + 1) * B.poch(mdb, n + 1)))

    return (1 + binv) * B.qsum(term, tri)


def recip3_lhs(B):
    a, b, c = (B.param(k) for k in "abc")
    return rho3_expr(B, a, b, c) - rho3_expr(B, b, a, c)


def recip3_rhs(B):
    a, b, c = (B.param(k) for k in "abc")
    q = B.q
    ainv, binv = B.inv(a), B.inv(b)
    return (binv - ainv) * _pr(B, [c, a * q * binv, b * q * ainv, q],
                               [-c * ainv, -c * binv, -a * q, -b * q])


def recip4_lhs(B):
    a, b, c, d = (B.param(k) for k in "abcd")
    return rho4_expr(B, a, b, c, d) - rho4_expr(B, b, a, c, d)


def recip4_rhs(B):
    a, b, c, d = (B.param(k) for k in "abcd")
    q = B.q
    ainv, binv = B.inv(a), B.inv(b)
    return (binv - ainv) * _pr(
        B, [d, c, c * d * ainv * binv, a * q * binv, b * q * ainv, q],
        [-d * ainv, -d * binv, -c * ainv, -c * binv, -a * q, -b * q])


# -- the one-parameter representation -----------------------------------------------------
def c_summation_lhs(B):
    c = B.param("c")
    q = B.q
    mcq = -c * q
    return B.qsum(lambda n: B.scaled(B.qpow(tri(n)), lambda: B.poch(c, n)
                                     * B.inv(B.poch(q, n) * B.poch(mcq, n))), tri)


def c_summation_rhs(B):
    c = B.param("c")
    return _pr(B, [-B.q], [-c * B.q])


def sigma_c_lhs(B):
    return sigma_c_expr(B, B.param("c"))


def recip3_special_product(B, c, z):
    q = B.q
    zinv = B.inv(z)
    return _pr(B, [c, -z * q, -zinv, q], [c * zinv, -c, z * q, -q])


def sigma_c_derivative_rhs(B):
    c = B.param("c")
    return B.eps_part(lambda z: rho3_expr(B, -z, B.const(1), c) - recip3_special_product(B, c, z))


def rho3_special_expr(B, c, z):
    """2 sum (c)_n z^n q^{n(n+1)/2} / ((zq)_n (-c)_{n+1})."""
    zq = z * B.q
    mc = -c

    def term(n):
        return B.scaled(z ** n * B.qpow(tri(n)),
                        lambda: B.poch(c, n) * B.inv(B.poch(zq, n) * B.poch(mc, n + 1)))

    return 2 * B.qsum(term, tri)


def rho3_special_lhs(B):
    return rho3_special_expr(B, B.param("c"), B.param("z"))


def rho3_transformed_rhs(B):
    c, z = B.param("c"), B.param("z")
    q = B.q
    zinv = B.inv(z)
    cz = c * zinv
    k = _one_minus_inv(B, z)
    common = B.pinf(c) * B.inv(B.pinf(-c) * B.pinf(cz))
    mq = -q

    tail_j = B.qsum(lambda j: B.scaled(B.qpow(tri(j)) * zinv ** j,
                                       lambda: B.inv(B.poch(mq, j))), tri, 1)

    def inner(p):
        def term(n):
            return B.scaled((-cz) ** n * B.qpow(tri(n)),
                            lambda: B.inv(B.poch(q, n) * (1 - B.qpow(n + p))))
        return B.qsum(term, lambda n: n + tri(n))

    def outer(p):
        return B.scaled(c ** p, lambda: B.poch(mq, p - 1) * B.inv(B.poch(q, p - 1)) * inner(p))

    double = B.qsum(outer, lambda p: p, 1)
    return (_pr(B, [-zinv, c, -z * q, q], [-q, -c, z * q, cz])
            + common * k * tail_j + common * k + 2 * common * k * double)


def sigma_one_param_rhs(B):
    c = B.param("c")
    q = B.q
    mq = -q

    def inner(m):
        def term(n):
            sign = -1 if n % 2 else 1
            return B.scaled(c ** n * B.qpow(tri(n)) * sign,
                            lambda: B.inv(B.poch(q, n) * (1 - B.qpow(n + m + 1))))
        return B.qsum(term, lambda n: n + tri(n))

    def outer(m):
        return B.scaled(c ** (m + 1), lambda: B.poch(mq, m) * B.inv(B.poch(q, m)) * inner(m))

    return B.pinf(-c) * sigma_c_expr(B, c) - 2 * B.qsum(outer, lambda m: m + 1)


def sigma_lhs(B):
    return sigma_expr(B)


def _lambert_c(B, c, start=0):
    # sum_{n >= start} c q^n / (1 - c q^n)
    def term(n):
        x = c * B.qpow(n)
        return B.scaled(x, lambda: B.inv(1 - x))
    return term


def sigma_c_triple_product_rhs(B):
    c = B.param("c")
    q = B.q
    S = _pr(B, [-q], [-c])
    lam_c = B.qsum(_lambert_c(B, c), lambda n: n + 1)
    lam_q = B.qsum(_lambert_c(B, B.const(1)), lambda n: n, 1)
    eps = B.eps_part(lambda z: rho3_special_expr(B, c, z))
    return eps + S + 2 * S * (lam_c - lam_q)


# -- the two-parameter representation -----------------------------------------------------
def cd_summation_lhs(B):
    c, d = B.param("c"), B.param("d")
    q = B.q
    cd = c * d
    num = [c, d, -cd]
    den = [-c * q, -d * q, q]

    def term(n):
        return B.scaled(B.qpow(tri(n)), lambda: _pochs(B, num, n) * (1 + cd * B.qpow(2 * n))
                        * B.inv(_pochs(B, den, n)))

    return B.qsum(term, tri)


def cd_summation_rhs(B):
    c, d = B.param("c"), B.param("d")
    q = B.q
    return _pr(B, [-c * d, -q], [-c * q, -d * q])


def five_param_lhs(B):
    x, y, b, c, d = (B.param(k) for k in "xybcd")
    q = B.q
    xinv, yinv = B.inv(x), B.inv(y)
    bcd = b * c * d
    top1 = [q * B.inv(b * x), q * B.inv(c * x), q * B.inv(d * x)]
    top2 = [q * B.inv(b * y), q * B.inv(c * y), q * B.inv(d * y)]
    # (-bcd x y^2 / q)^n q^{n(n+1)/2} = (-bcd x y^2)^n q^{n(n-1)/2}
    r1 = -bcd * x * y * y
    r2 = -bcd * x * x * y

    def term1(n):
        return B.scaled(r1 ** n * B.qpow(n * (n - 1) // 2),
                        lambda: (1 - B.qpow(2 * n + 1) * y * xinv) * _pochs(B, top1, n)
                        * B.inv(B.poch(b * y, n + 1) * B.poch(d * y, n + 1) * B.poch(c * y * q, n)))

    def term2(n):
        return B.scaled(r2 ** n * B.qpow(n * (n - 1) // 2),
                        lambda: (1 - B.qpow(2 * n + 1) * x * yinv) * _pochs(B, top2, n)
                        * B.inv(_pochs(B, [b * x, c * x, d * x], n + 1)))

    bound = lambda n: n * (n - 1) // 2  # noqa: E731
    return y * B.qsum(term1, bound) - x * (1 - c * y) * B.qsum(term2, bound)


def five_param_rhs(B):
    x, y, b, c, d = (B.param(k) for k in "xybcd")
    q = B.q
    xy = x * y
    return (y - x) * _pr(B, [q, q * y * B.inv(x), q * x * B.inv(y), b * c * xy, c * d * xy, b * d * xy],
                         [b * x, b * y, c * x, c * y * q, d * x, d * y])


def rho4_special_expr(B, c, d, z):
    """2 sum (d, c, -cd/z)_n (1 + cd q^{2n}) z^n q^{n(n+1)/2} / ((zq)_n (-c, -d)_{n+1})."""
    q = B.q
    cd = c * d
    num = [d, c, -cd * B.inv(z)]
    zq = z * q

    def term(n):
        return B.scaled(z ** n * B.qpow(tri(n)), lambda: _pochs(B, num, n)
                        * (1 + cd * B.qpow(2 * n))
                        * B.inv(B.poch(zq, n) * B.poch(-c, n + 1) * B.poch(-d, n + 1)))

    return 2 * B.qsum(term, tri)


def rho4_special_product(B, c, d, z):
    q = B.q
    zinv = B.inv(z)
    return _pr(B, [d, c, -c * d * zinv, -z * q, -zinv, q],
               [d * zinv, -d, c * zinv, -c, z * q, -q])


def sigma_cd_lhs(B):
    return sigma_cd_expr(B, B.param("c"), B.param("d"))


def sigma_cd_derivative_rhs(B):
    c, d = B.param("c"), B.param("d")
    return B.eps_part(lambda z: rho4_special_expr(B, c, d, z) - rho4_special_product(B, c, d, z))


def rho4_special_lhs(B):
    return rho4_special_expr(B, B.param("c"), B.param("d"), B.param("z"))


def _shifted_pochs(B, x, n, shift):
    return B.poch(x * B.qpow(shift), n)


def rho4_transformed_rhs(B):
    c, d, z = B.param("c"), B.param("d"), B.param("z")
    q = B.q
    zinv = B.inv(z)
    z2inv = zinv * zinv
    cd = c * d
    mq = -q
    k = _one_minus_inv(B, z)
    cz, dz = c * zinv, d * zinv
    mcdz, mcdz2 = -cd * zinv, -cd * z2inv

    t1 = _pr(B, [mcdz, d, c, q, -z * q, -zinv], [-d, -c, z * q, -q, cz, dz])

    tail_j = B.qsum(lambda j: B.scaled(B.qpow(tri(j)) * zinv ** j,
                                       lambda: B.inv(B.poch(mq, j))), tri, 1)
    t2 = _pr(B, [mcdz, d, c], [-d, -c, cz, dz]) * k * tail_j

    def t3_term(n):
        return B.scaled(B.qpow(tri(n) + 2 * n), lambda: _pochs(B, [cz, dz, mcdz2], n)
                        * B.inv(_pochs(B, [-cz * q, -dz * q, q], n)))

    t3 = (cd * (1 + 2 * z) * z2inv * k
          * _pr(B, [mcdz, d, c, -cz * q, -dz * q], [-d, -c, -q, cz, dz, mcdz2])
          * B.qsum(t3_term, lambda n: tri(n) + 2 * n))

    t4 = (_pr(B, [mcdz, d, c, -dz * q], [-d, -c, -q, dz, mcdz2]) * k
          * _lambda_triple(B, c, d, cz, dz, mcdz2))
    t5 = (_pr(B, [mcdz, d, c], [-d, -c, -q, mcdz2]) * k
          * _lambda_quad1(B, c, d, dz, mcdz2))
    t6 = (2 * _pr(B, [mcdz, d, c], [-d, -c]) * k
          * _lambda_quad2(B, c, d, mcdz, mcdz2))
    return t1 + t2 + t3 + t4 + t5 + t6


def _lambda_triple(B, c, d, ck, dn, mcdn):
    """sum_p (-q)_p(-1)_p c^p/(q)_p sum_k (-q^{p+1})_k ck^k/(q^{p+1})_k
       sum_n (mcdn, dn)_n/(-dn q, q)_n q^{n(n+1)/2+(p+k)n} (1 + cd q^{2n}(1+q^p)(1+q^{p+1}))."""
    q = B.q
    mq = -q
    cd = c * d

    def level_n(p, kk):
        def term(n):
            return B.scaled(B.qpow(tri(n) + (p + kk) * n), lambda: _pochs(B, [mcdn, dn], n)
                            * B.inv(_pochs(B, [-dn * q, q], n))
                            * (1 + cd * B.qpow(2 * n) * (1 + B.qpow(p)) * (1 + B.qpow(p + 1))))
        return B.qsum(term, lambda n: tri(n) + (p + kk) * n)

    def level_k(p):
        qp1 = B.qpow(p + 1)
        return B.qsum(lambda kk: B.scaled(ck ** kk, lambda: B.poch(-qp1, kk)
                                          * B.inv(B.poch(qp1, kk)) * level_n(p, kk)),
                      lambda kk: kk)

    return B.qsum(lambda p: B.scaled(c ** p, lambda: B.poch(mq, p) * B.poch(B.const(-1), p)
                                     * B.inv(B.poch(q, p)) * level_k(p)),
                  lambda p: p)


def _lambda_quad1(B, c, d, dj, mcdn):
    """sum_{p>=1} (-q)_p(-1)_p d^p/(q)_p sum_k (-q)_k(-q^p)_k c^k/(q)_k
       sum_j (-q^{p+1})_j dj^j/(q^{p+1})_j sum_n (mcdn)_n/(q)_n q^{n(n+1)/2+(p+k+j)n}
       (1 + cd q^{2n}(1+q^{p+k})(1+q^{p+k+1}))."""
    q = B.q
    mq = -q
    cd = c * d

    def level_n(p, kk, j):
        s = p + kk + j

        def term(n):
            return B.scaled(B.qpow(tri(n) + s * n), lambda: B.poch(mcdn, n) * B.inv(B.poch(q, n))
                            * (1 + cd * B.qpow(2 * n) * (1 + B.qpow(p + kk)) * (1 + B.qpow(p + kk + 1))))
        return B.qsum(term, lambda n: tri(n) + s * n)

    def level_j(p, kk):
        qp1 = B.qpow(p + 1)
        return B.qsum(lambda j: B.scaled(dj ** j, lambda: B.poch(-qp1, j) * B.inv(B.poch(qp1, j))
                                         * level_n(p, kk, j)),
                      lambda j: j)

    def level_k(p):
        mqp = -B.qpow(p)
        return B.qsum(lambda kk: B.scaled(c ** kk, lambda: B.poch(mq, kk) * B.poch(mqp, kk)
                                          * B.inv(B.poch(q, kk)) * level_j(p, kk)),
                      lambda kk: kk)

    return B.qsum(lambda p: B.scaled(d ** p, lambda: B.poch(mq, p) * B.poch(B.const(-1), p)
                                     * B.inv(B.poch(q, p)) * level_k(p)),
                  lambda p: p, 1)


def _lambda_quad2(B, c, d, r_p, r_m):
    """sum_{p>=1} r_p^p/(q)_p sum_j (-q)_j d^j/(q)_j sum_k (-q)_k c^k/(q)_k
       sum_m r_m^m / ((q^{p+1})_m (-q^{p+k+j})_{m+1})
       (1 + cd (1+q^{s})(1+q^{s+1}) / ((1+q^{s+m+1})(1+q^{s+m+2}))), s = p+k+j."""
    q = B.q
    mq = -q
    cd = c * d

    def level_m(p, j, kk):
        s = p + kk + j
        qp1 = B.qpow(p + 1)
        mqs = -B.qpow(s)
        fixed = (1 + B.qpow(s)) * (1 + B.qpow(s + 1))

        def term(m):
            return B.scaled(r_m ** m, lambda: B.inv(B.poch(qp1, m) * B.poch(mqs, m + 1))
                            * (1 + cd * fixed * B.inv((1 + B.qpow(s + m + 1)) * (1 + B.qpow(s + m + 2)))))
        return B.qsum(term, lambda m: 2 * m)

    def level_k(p, j):
        return B.qsum(lambda kk: B.scaled(c ** kk, lambda: B.poch(mq, kk) * B.inv(B.poch(q, kk))
                                          * level_m(p, j, kk)),
                      lambda kk: kk)

    def level_j(p):
        return B.qsum(lambda j: B.scaled(d ** j, lambda: B.poch(mq, j) * B.inv(B.poch(q, j))
                                         * level_k(p, j)),
                      lambda j: j)

    return B.qsum(lambda p: B.scaled(r_p ** p, lambda: B.inv(B.poch(q, p)) * level_j(p)),
                  lambda p: 2 * p, 1)


def lambda_expr(B, c, d):
    """The correction term in the two-parameter representation of sigma."""
    q = B.q
    cd = c * d
    mcd = -cd

    def first_term(n):
        return B.scaled(B.qpow(tri(n) + 2 * n), lambda: _pochs(B, [c, d, mcd], n)
                        * B.inv(_pochs(B, [-c * q, -d * q, q], n)))

    first = (3 * cd * _pr(B, [-c * q, -d * q], [mcd, -q])
             * B.qsum(first_term, lambda n: tri(n) + 2 * n))
    second = _pr(B, [-d * q, c], [mcd, -q]) * _lambda_triple(B, c, d, c, d, mcd)
    third = _pr(B, [d, c], [mcd, -q]) * _lambda_quad1(B, c, d, d, mcd)
    fourth = 2 * _pr(B, [d, c], []) * _lambda_quad2(B, c, d, mcd, mcd)
    return 1 - first - second - third - fourth


def sigma_two_param_rhs(B):
    c, d = B.param("c"), B.param("d")
    return _pr(B, [-c, -d], [-c * d]) * sigma_cd_expr(B, c, d) + lambda_expr(B, c, d)


def lambda_d0_lhs(B):
    return lambda_expr(B, B.param("c"), B.const(0))


def lambda_d0_rhs(B):
    c = B.param("c")
    q = B.q
    mq = -q

    def inner(m):
        def term(n):
            sign = -1 if n % 2 else 1
            return B.scaled(c ** n * B.qpow(tri(n)) * sign,
                            lambda: B.inv(B.poch(q, n) * (1 - B.qpow(n + m + 1))))
        return B.qsum(term, lambda n: n + tri(n))

    def outer(m):
        return B.scaled(c ** (m + 1), lambda: B.poch(mq, m) * B.inv(B.poch(q, m)) * inner(m))

    return -2 * B.qsum(outer, lambda m: m + 1)


def sigma_cd_triple_product_rhs(B):
    c, d = B.param("c"), B.param("d")
    q = B.q
    cd = c * d
    S = _pr(B, [-cd, -q], [-d, -c])

    def lam_cd(n):
        x = cd * B.qpow(n)
        return B.scaled(x, lambda: B.inv(1 + x))

    s_cd = B.qsum(lam_cd, lambda n: n + 2)
    s_d = B.qsum(_lambert_c(B, d), lambda n: n + 1)
    s_c = B.qsum(_lambert_c(B, c), lambda n: n + 1)
    s_q = B.qsum(_lambert_c(B, B.const(1)), lambda n: n, 1)
    eps = B.eps_part(lambda z: rho4_special_expr(B, c, d, z))
    return eps + S * (1 + 2 * s_cd) + 2 * S * (s_d + s_c - s_q)


# -- Agarwal-type transformations (numeric only) -------------------------------------------
def _phi2_tail(B, al, be, t):
    q = B.q
    return B.phi([q, q * B.inv(t)], [be * q * B.inv(al * t)], q * B.inv(al))


def agarwal_lhs(B):
    al, be, ga, de, t = (B.param(k) for k in ("alpha", "beta", "gamma", "delta", "t"))
    return B.qsum(lambda n: B.poch(al, n) * B.poch(ga, n) * B.inv(B.poch(be, n) * B.poch(de, n))
                  * t ** n, None)


def agarwal_rhs(B):
    al, be, ga, de, t = (B.param(k) for k in ("alpha", "beta", "gamma", "delta", "t"))
    q = B.q
    ibe = B.inv(be)
    at = al * t
    lead = _pr(B, [q * B.inv(at), ga, at, be * B.inv(al), q],
               [be * B.inv(at), de, t, q * B.inv(al), be])
    first = lead * B.phi([de * B.inv(ga), t], [q * at * ibe], ga * q * ibe)
    k = 1 - q * ibe
    gd = B.pinf(ga) * B.inv(B.pinf(de))
    r = q * ga * ibe

    def m_term(m):
        return (B.poch(de * B.inv(ga), m) * B.poch(t, m)
                * B.inv(B.poch(q, m) * B.poch(at * ibe, m + 1)) * r ** m)

    second = gd * k * B.qsum(m_term, None) * (_phi2_tail(B, al, be, t) - 1)

    def p_term(p):
        qp = B.qpow(p)
        x1, x2, x3, x4 = de * qp * B.inv(ga), t * qp, q * qp, at * qp * ibe

        def inner(m):
            return (B.poch(x1, m) * B.poch(x2, m) * B.inv(B.poch(x3, m) * B.poch(x4, m + 1))
                    * r ** m)

        return B.scaled(ga ** p * B.poch(de * B.inv(ga), p) * B.inv(B.poch(q, p)),
                        lambda: B.qsum(inner, None))

    third = gd * k * B.qsum(p_term, None)
    return first + second + third


def three_denominator_lhs(B):
    al, be, ga, de, e, f, t = (B.param(k) for k in ("alpha", "beta", "gamma", "delta", "e", "f", "t"))
    return B.qsum(lambda n: _pochs(B, [al, ga, e], n) * B.inv(_pochs(B, [be, de, f], n)) * t ** n,
                  None)


def three_denominator_rhs(B):
    al, be, ga, de, e, f, t = (B.param(k) for k in ("alpha", "beta", "gamma", "delta", "e", "f", "t"))
    q = B.q
    ibe = B.inv(be)
    at = al * t
    qb = q * ibe
    k = 1 - qb
    p32 = B.phi([al * qb, ga * qb, e * qb], [de * qb, f * qb], t)
    x = _pr(B, [e, ga, be * B.inv(al), q, at, q * B.inv(at), de * qb, f * qb],
            [f, de, q * B.inv(al), be, be * B.inv(at), at * qb, ga * qb, e * qb]) * p32
    y1 = (k * _pr(B, [e, ga, t, de * qb, f * qb], [f, de, at * ibe, ga * qb, e * qb]) * p32
          * (_phi2_tail(B, al, be, t) - 1))

    def y21_p(p):
        qp = B.qpow(p)

        def k_term(kk):
            return B.scaled(B.poch(de * qp * B.inv(ga), kk) * (ga * qb) ** kk
                            * B.inv(B.poch(q * qp, kk)),
                            lambda: B.phi([al * qb, e * qb], [f * qb], t * qp * B.qpow(kk)))

        return B.scaled(B.poch(de * B.inv(ga), p) * B.poch(at * ibe, p) * ga ** p
                        * B.inv(B.poch(t, p) * B.poch(q, p)), lambda: B.qsum(k_term, None))

    y21 = k * _pr(B, [e, ga, t, f * qb], [f, de, at * ibe, e * qb]) * B.qsum(y21_p, None)

    def y22_p(p):
        qp = B.qpow(p)

        def k_level(kk):
            qpk = qp * B.qpow(kk)

            def m_term(m):
                return (B.poch(f * qp * B.inv(e), m) * B.poch(t * qpk, m)
                        * B.inv(B.poch(q * qp, m) * B.poch(at * qpk * ibe, m + 1)) * (e * qb) ** m)

            return B.scaled(B.poch(de * B.inv(ga), kk) * ga ** kk * B.inv(B.poch(q, kk)),
                            lambda: B.qsum(m_term, None))

        return B.scaled(B.poch(f * B.inv(e), p) * e ** p * B.inv(B.poch(q, p)),
                        lambda: B.qsum(k_level, None))

    y22 = k * _pr(B, [e, ga], [f, de]) * B.qsum(y22_p, None, 1)
    return x + y1 + y21 + y22


def nineparam_lhs(B):
    al, be, ga, de, e, f, g, h, t = (B.param(k) for k in
                                     ("alpha", "beta", "gamma", "delta", "e", "f", "g", "h", "t"))
    return B.qsum(lambda n: _pochs(B, [al, ga, e, g], n) * B.inv(_pochs(B, [be, de, f, h], n))
                  * t ** n, None)


def nineparam_rhs(B):
    al, be, ga, de, e, f, g, h, t = (B.param(k) for k in
                                     ("alpha", "beta", "gamma", "delta", "e", "f", "g", "h", "t"))
    q = B.q
    ibe = B.inv(be)
    at = al * t
    qb = q * ibe
    k = 1 - qb
    p43 = B.phi([al * qb, ga * qb, e * qb, g * qb], [de * qb, f * qb, h * qb], t)
    x = _pr(B, [g, e, ga, be * B.inv(al), q, at, q * B.inv(at), de * qb, f * qb, h * qb],
            [h, f, de, q * B.inv(al), be, be * B.inv(at), at * qb, ga * qb, e * qb, g * qb]) * p43
    y1 = (k * _pr(B, [g, e, ga, t, de * qb, f * qb, h * qb],
                  [h, f, de, at * ibe, ga * qb, e * qb, g * qb])
          * p43 * (_phi2_tail(B, al, be, t) - 1))

    def y21_p(p):
        qp = B.qpow(p)

        def k_term(kk):
            return B.scaled(B.poch(de * qp * B.inv(ga), kk) * (ga * qb) ** kk
                            * B.inv(B.poch(q * qp, kk)),
                            lambda: B.phi([al * qb, e * qb, g * qb], [f * qb, h * qb],
                                          t * qp * B.qpow(kk)))

        return B.scaled(B.poch(de * B.inv(ga), p) * B.poch(at * ibe, p) * ga ** p
                        * B.inv(B.poch(t, p) * B.poch(q, p)), lambda: B.qsum(k_term, None))

    y21 = k * _pr(B, [g, e, ga, t, f * qb, h * qb], [h, f, de, at * ibe, e * qb, g * qb]) \
        * B.qsum(y21_p, None)

    def y22_p(p):
        qp = B.qpow(p)

        def k_level(kk):
            def j_term(j):
                return B.scaled(B.poch(f * qp * B.inv(e), j) * (e * qb) ** j
                                * B.inv(B.poch(q * qp, j)),
                                lambda: B.phi([al * qb, g * qb], [h * qb],
                                              t * qp * B.qpow(kk + j)))

            return B.scaled(B.poch(de * B.inv(ga), kk) * B.poch(at * qp * ibe, kk) * ga ** kk
                            * B.inv(B.poch(q, kk) * B.poch(t * qp, kk)),
                            lambda: B.qsum(j_term, None))

        return B.scaled(B.poch(f * B.inv(e), p) * B.poch(at * ibe, p) * e ** p
                        * B.inv(B.poch(t, p) * B.poch(q, p)), lambda: B.qsum(k_level, None))

    y22 = k * _pr(B, [g, e, ga, t, h * qb], [h, f, de, at * ibe, g * qb]) * B.qsum(y22_p, None, 1)

    def y23_p(p):
        qp = B.qpow(p)

        def j_level(j):
            def k_level(kk):
                qs = qp * B.qpow(kk + j)

                def m_term(m):
                    return (B.poch(h * qp * B.inv(g), m) * B.poch(t * qs, m)
                            * B.inv(B.poch(q * qp, m) * B.poch(at * qs * ibe, m + 1)) * (g * qb) ** m)

                return B.scaled(B.poch(de * B.inv(ga), kk) * ga ** kk * B.inv(B.poch(q, kk)),
                                lambda: B.qsum(m_term, None))

            return B.scaled(B.poch(f * B.inv(e), j) * e ** j * B.inv(B.poch(q, j)),
                            lambda: B.qsum(k_level, None))

        return B.scaled(B.poch(h * B.inv(g), p) * g ** p * B.inv(B.poch(q, p)),
                        lambda: B.qsum(j_level, None))

    y23 = k * _pr(B, [g, e, ga], [h, f, de]) * B.qsum(y23_p, None, 1)
    return x + y1 + y21 + y22 + y23
