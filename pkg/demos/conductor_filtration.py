"""Ramification filtration and Artin conductors of the r = 1 towers.

The two anabelomorphic sextic fields have different filtration breaks,
so the induced two-dimensional character picks up different conductors
(5 versus 3 at p = 3) while the conductor-discriminant identity holds
exactly on each side.
"""

from anabelomorph import (TowerStep, build_field,
                          conductor_discriminant_check,
                          ramification_filtration)

T = TowerStep


def show(radicand):
    K = build_field(3, [T.cyclotomic(3), T.kummer(3, radicand)])
    filt = ramification_filtration(K)
    rep = conductor_discriminant_check(K)
    print(f"radicand {radicand}:")
    print("   i(sigma) multiset:", sorted(filt.i_values.values()))
    print("   breaks:", filt.breaks)
    print("   conductors:", rep["conductors"])
    print("   swan:", rep["swan"])
    print("   ledger:", rep["sum_dim_times_conductor"], "=",
          rep["disc_valuation"])
    print("   inducing character over the cyclotomic base:",
          rep["wild_char_conductor_over_cyclotomic"])


def main():
    show(3)
    show(4)


if __name__ == "__main__":
    main()
