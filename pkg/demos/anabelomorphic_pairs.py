"""Deciding when two Kummer fields have isomorphic absolute Galois groups.

The criterion for fields containing zeta_p: equal absolute degree and
equal maximal abelian subfield.  For Q_p(zeta_{p^r}, a^(1/p^r)) both are
computable, so the verdict is a certificate, not a heuristic.
"""

from anabelomorph import (KummerFieldSpec, jarden_ritter, partition_classes,
                          peu_tres_classify)


def pair_verdicts():
    pairs = [
        (KummerFieldSpec(3, 1, 3), KummerFieldSpec(3, 1, 4)),
        (KummerFieldSpec(3, 2, 3), KummerFieldSpec(3, 2, 4)),
        (KummerFieldSpec(3, 2, 3), KummerFieldSpec(3, 2, -7)),
        (KummerFieldSpec(5, 1, 5), KummerFieldSpec(5, 1, 6)),
        (KummerFieldSpec(3, 1, 3), KummerFieldSpec(3, 2, 3)),
    ]
    for a, b in pairs:
        v = jarden_ritter(a, b)
        print(f"{a.describe():42s} ~ {b.describe():42s} -> {v.status}")
        print(f"    {v.reason}")


def classes_of_radicands():
    specs = [KummerFieldSpec(3, 2, rad) for rad in (3, 4, -7, 2, 5)]
    classes, flags = partition_classes(specs)
    print("\nradicands 3, 4, -7, 2, 5 at p=3, r=2 partition into:")
    for cls in classes:
        print("   ", [specs[i].radicand for i in cls])


def ramification_style():
    # the same anabelomorphism class contains fields whose wild radicals
    # have unit and non-unit valuations: the peu/tres type is not a
    # Galois-group invariant
    a, b = KummerFieldSpec(3, 1, 3), KummerFieldSpec(3, 1, 4)
    print(f"\n{a.describe()}: {peu_tres_classify(a)}")
    print(f"{b.describe()}: {peu_tres_classify(b)}")
    print("verdict for the pair:", jarden_ritter(a, b).status)


def main():
    pair_verdicts()
    classes_of_radicands()
    ramification_style()


if __name__ == "__main__":
    main()
