"""Differents and discriminants across an anabelomorphism class.

Anabelomorphic fields share degree, ramification index and residue
degree, yet their differents differ: the additive structure is not
determined by the Galois group.
"""

from anabelomorph import (TowerStep, build_field, different_bound,
                          different_valuation, discriminant_valuation,
                          find_uniformizer, norm_to_qp, closed_form_disc)

T = TowerStep


def r1_pair():
    K = build_field(3, [T.cyclotomic(3), T.kummer(3, 3)])
    L = build_field(3, [T.cyclotomic(3), T.kummer(3, 4)])
    print("Q_3(zeta_3, 3^(1/3)):  v(different) =", different_valuation(K),
          " bound e-1+n/f =", different_bound(K))
    print("Q_3(zeta_3, 4^(1/3)):  v(different) =", different_valuation(L),
          " bound e-1+n/f =", different_bound(L))


def degree54_table():
    print("\n[a, v_3(disc)] for Q_3(zeta_9, a^(1/9)):")
    for rad in (3, 4, -7, 2):
        K = build_field(3, [T.cyclotomic(9), T.kummer(9, rad)])
        print(f"   [{rad}, {discriminant_valuation(K)}]   "
              f"(n={K.n}, e={K.e}, f={K.f})")


def closed_forms():
    print("\nclosed forms against the tower computation:")
    for p in (3, 5):
        for r in (1, 2):
            a = closed_form_disc(p, r, "radicand-p")
            b = closed_form_disc(p, r, "radicand-1+p")
            print(f"   p={p} r={r}: radicand p -> {a}, radicand 1+p -> {b}")


def uniformizers():
    K = build_field(3, [T.cyclotomic(9), T.kummer(9, 3)])
    pi = find_uniformizer(K)
    print("\ndegree-54 uniformizer found with v =", pi.valuation())
    g = K.step_generators[1]
    print("v(9th root of 3) =", g.valuation(),
          "  norm valuation =", norm_to_qp(g).valuation())


def main():
    r1_pair()
    degree54_table()
    closed_forms()
    uniformizers()


if __name__ == "__main__":
    main()
