"""The branch-normalized logarithm and the log-over-ord invariant.

The logarithm uses the branch log(p) = 0 and kills torsion, so prime
powers vanish and the invariant log(q)/ord(q) of a Tate parameter is
insensitive to replacing q by q^k.  Rationalizing a truncated minimal
polynomial through coefficient closeness gives a dense number field
certificate.
"""

from anabelomorph import (PadicScalar, build_field, krasner_rationalize,
                          l_invariant, padic_log)


def scalar_logs():
    u = PadicScalar.from_int(4, 3, 40)
    print("log(1+3) in Q_3:", padic_log(u, prec=12))
    print("log(9):", padic_log(PadicScalar.from_int(9, 3, 40)))
    a = PadicScalar.from_int(7, 3, 40)
    b = PadicScalar.from_int(5, 3, 40)
    d = padic_log(a * b, prec=16) - padic_log(a, prec=16) - padic_log(b, prec=16)
    print("log(ab) - log(a) - log(b) vanishes:",
          d.is_bottom or d.valuation() > 12)


def tate_parameter_invariant():
    Q3 = build_field(3, [])
    q = Q3.from_int(12)          # p (1 + p), a Tate parameter
    l1 = l_invariant(q)
    l3 = l_invariant(q ** 3)
    d = l1 - l3
    print("\nl(q) == l(q^3):",
          d.is_zero_to_precision() or d.valuation() > 20)
    print("l(p^5) == 0:", l_invariant(Q3.from_int(3 ** 5)).is_zero_to_precision())


def rationalize():
    u = PadicScalar.from_int(1 + 3 * 7, 3, 30)
    coeffs = [-(PadicScalar.from_int(3, 3, 30)
                + PadicScalar.from_int(9, 3, 30) * u),
              PadicScalar.from_int(0, 3, 30),
              PadicScalar.from_int(0, 3, 30),
              PadicScalar.from_int(1, 3, 30)]
    out, cert = krasner_rationalize(coeffs)
    print("\ntruncated Eisenstein cubic rationalizes to", out)
    print("closeness threshold", cert["threshold"],
          "attained", cert["attained_closeness"],
          "disc valuations match:", cert["disc_valuations_match"])


def main():
    scalar_logs()
    tate_parameter_invariant()
    rationalize()


if __name__ == "__main__":
    main()
