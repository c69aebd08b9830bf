"""Reduction data of elliptic curves over anabelomorphic tower fields.

Base-changing a fixed curve to two fields with isomorphic Galois groups
can change the minimal discriminant, the conductor exponent, the Kodaira
symbol and the Tamagawa number all at once -- but on the semistable rows
the quadruples stay identical.
"""

from anabelomorph import (TowerStep, WeierstrassModel, build_field,
                          parse_curve, tate_algorithm,
                          weak_amphoricity_report)

T = TowerStep


def additive_pair():
    K = build_field(3, [T.cyclotomic(9), T.kummer(9, 3)])
    L = build_field(3, [T.cyclotomic(9), T.kummer(9, 2)])
    for a6 in (9, 3):
        rK = tate_algorithm(WeierstrassModel.from_a_invariants(K, a2=3, a6=a6))
        rL = tate_algorithm(WeierstrassModel.from_a_invariants(L, a2=3, a6=a6))
        print(f"y^2 = x^3 + 3x^2 + {a6}:")
        print(f"   over 9th-root-of-3 tower: {rK.quadruple()}")
        print(f"   over 9th-root-of-2 tower: {rL.quadruple()}")


def semistable_rows():
    K = build_field(3, [T.cyclotomic(9), T.kummer(9, 3)])
    L = build_field(3, [T.cyclotomic(9), T.kummer(9, 4)])
    rows = [
        "[0,z^5+z^4-6z^3-z-9,0,z^5-z^4+8z^2-z+12,z^5+z^2+1]",
        "[0,2z^5-2z^4-z^3+z-5,0,-z^4+z^3-3z^2+8z+11,z^5+z^4-2z^3+3z^2-z+1]",
        "[0,-z^5-z^4-z^3+z^2-3,0,-z^4-2z^3-3z^2-z-16,31z^5-3z^4-z^3+z+53]",
    ]
    print("\nsemistable rows (identical on both sides):")
    for txt in rows:
        rep = weak_amphoricity_report(parse_curve(txt), K, L)
        print("  ", rep["first"].quadruple(), rep["second"].quadruple(),
              "equal:", rep["all_equal"])


def small_field_check():
    # a classical sanity point over Q_11
    Q11 = build_field(11, [])
    r = tate_algorithm(WeierstrassModel.from_a_invariants(
        Q11, a2=-1, a3=1, a4=-10, a6=-20))
    print("\nconductor-11 curve over Q_11:", r.quadruple())


def main():
    additive_pair()
    semistable_rows()
    small_field_check()


if __name__ == "__main__":
    main()
