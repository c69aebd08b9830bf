"""Deciding anabelomorphism of Kummer fields over Q_p.

Two p-adic fields containing zeta_p have topologically isomorphic
absolute Galois groups exactly when they have the same absolute degree
and the same maximal abelian subfield over Q_p.  For the Kummer family
Q_p(zeta_{p^r}, a^{1/p^r}) both invariants are decidable: the degree by
a p-th power test of the radicand in the cyclotomic level, and the
maximal abelian subfield (the cyclotomic level itself) by the
non-commutativity of the zeta- and root-directions.

The verdict is three-valued: UNDECIDED is preferred over guessing
whenever the certificate does not apply (non-rational radicands whose
Galois stability is not established).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fields import (CertificationError, DegreeDropError, FieldError,
                     TowerStep, _parse_radicand, _peel_unit,
                     _pth_root_of_unity, build_field)
from .padic import PadicScalar, PrecisionError, _vp, is_prime

ANABELOMORPHIC = "ANABELOMORPHIC"
NOT_ANABELOMORPHIC = "NOT_ANABELOMORPHIC"
UNDECIDED = "UNDECIDED"

PEU = "PEU"
TRES = "TRES"


@dataclass(frozen=True)
class KummerFieldSpec:
    """Q_p(zeta_{p^r}, radicand^(1/p^r)); radicand None means the bare
    cyclotomic field Q_p(zeta_{p^r})."""
    p: int
    r: int
    radicand: object = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if isinstance(self.radicand, (int, Fraction)) and self.radicand == 0:
            raise ValueError("radicand must be nonzero")

    @property
    def modulus(self):
        return self.p ** self.r

    def cyclotomic_degree(self):
        return self.modulus - self.modulus // self.p

    def tower_steps(self):
        steps = [TowerStep.cyclotomic(self.modulus)]
        if self.radicand is not None:
            steps.append(TowerStep.kummer(self.modulus, self.radicand))
        return steps

    def build(self, prec=None):
        return build_field(self.p, self.tower_steps(), prec=prec)

    def describe(self):
        if self.radicand is None:
            return f"Q_{self.p}(zeta_{self.modulus})"
        return f"Q_{self.p}(zeta_{self.modulus}, ({self.radicand})^(1/{self.modulus}))"


@dataclass
class AnabelomorphismVerdict:
    status: str
    degree1: int = 0
    degree2: int = 0
    k0_label1: str = ""
    k0_label2: str = ""
    reason: str = ""

    def to_dict(self):
        return {
            "status": self.status,
            "degrees": [self.degree1, self.degree2],
            "maximal_abelian_subfields": [self.k0_label1, self.k0_label2],
            "reason": self.reason,
        }


def parse_kummer_spec(text):
    """Compact format: ``p=3 r=2 rad=3`` (rad optional, may be z-polynomial)."""
    p = r = None
    rad = None
    for tok in text.split():
        key, _, val = tok.partition("=")
        if key == "p":
            p = int(val)
        elif key == "r":
            r = int(val)
        elif key == "rad":
            rad = _parse_radicand(val)
        else:
            raise ValueError(f"unknown key {key!r} in spec {text!r}")
    if p is None or r is None:
        raise ValueError(f"spec {text!r} needs p= and r=")
    return KummerFieldSpec(p, r, rad)


def _radicand_is_pth_power(spec, prec=None):
    """True if the radicand is a p-th power in Q_p(zeta_{p^r})."""
    p = spec.p
    F = build_field(p, [TowerStep.cyclotomic(spec.modulus)], prec=prec)
    rad = F.from_int(spec.radicand) if isinstance(spec.radicand, int) else (
        F.from_fraction(spec.radicand) if isinstance(spec.radicand, Fraction)
        else F.from_zeta_poly(spec.radicand))
    v = rad.valuation()
    if v % p:
        return False
    xi = _pth_root_of_unity(F)
    xi_powers = [F.one()]
    for _ in range(p - 1):
        xi_powers.append(xi_powers[-1] * xi)
    k = v // p
    rad1 = (rad * F.pi_pow(-p * k))._normalized()
    if rad1.s:
        rad1 = (rad1 * F.from_int(p ** (p * ((rad1.s + p - 1) // p))))._normalized()
    kind, _ = _peel_unit(F, rad1, rad1.valuation(), xi_powers)
    return kind == "drop"


def _certify(spec, prec=None):
    """(degree, k0_label or None, abelian, reason fragment)."""
    p = spec.p
    if spec.radicand is None:
        return (spec.cyclotomic_degree(),
                f"Q_{p}(zeta_{spec.modulus})", True, "cyclotomic (abelian)")
    rational = isinstance(spec.radicand, (int, Fraction))
    if p == 2:
        # quadratic subtleties (a in -4 F^4): certify by building the tower
        K = spec.build(prec=prec)
        degree = K.n
    else:
        if _radicand_is_pth_power(spec, prec=prec):
            raise DegreeDropError(
                f"radicand {spec.radicand} is a p-th power in the cyclotomic "
                "level: the Kummer step drops degree")
        degree = spec.cyclotomic_degree() * spec.modulus
    if not rational:
        # zeta -> zeta^a moves the radicand; Galois stability over Q_p is
        # not certified, so the maximal abelian subfield stays unlabelled
        return degree, None, False, "non-rational radicand: K0 undecided"
    # non-abelian certificate: sigma_a tau sigma_a^{-1} = tau^a != tau for
    # some a, i.e. sigma_a fixes the Kummer direction only for a = 1
    nonabelian = spec.modulus > 2
    label = f"Q_{p}(zeta_{spec.modulus})" if nonabelian else None
    return degree, label, False, "full Kummer degree, nonabelian action"


def jarden_ritter(spec1, spec2, prec=None):
    """Anabelomorphism verdict for two Kummer field specifications.

    Same absolute degree and same maximal abelian subfield give
    ANABELOMORPHIC; a certified mismatch gives NOT_ANABELOMORPHIC;
    anything short of a certificate is UNDECIDED.
    """
    if spec1.p != spec2.p:
        return AnabelomorphismVerdict(
            NOT_ANABELOMORPHIC, reason="residue characteristic differs "
            f"({spec1.p} vs {spec2.p})")
    if spec1 == spec2:
        d, label, _, _ = _certify(spec1, prec=prec)
        return AnabelomorphismVerdict(
            ANABELOMORPHIC, d, d, label or spec1.describe(),
            label or spec2.describe(), "identical specifications")
    d1, l1, ab1, why1 = _certify(spec1, prec=prec)
    d2, l2, ab2, why2 = _certify(spec2, prec=prec)
    if d1 != d2:
        return AnabelomorphismVerdict(
            NOT_ANABELOMORPHIC, d1, d2, l1 or "?", l2 or "?",
            f"absolute degrees differ: {d1} != {d2}")
    if ab1 and ab2:
        # both abelian: the fields are their own maximal abelian subfields
        if spec1.modulus == spec2.modulus:
            return AnabelomorphismVerdict(ANABELOMORPHIC, d1, d2, l1, l2,
                                          "equal abelian fields")
        return AnabelomorphismVerdict(NOT_ANABELOMORPHIC, d1, d2, l1, l2,
                                      "distinct abelian fields of equal degree")
    if l1 is not None and l2 is not None:
        if l1 == l2:
            return AnabelomorphismVerdict(
                ANABELOMORPHIC, d1, d2, l1, l2,
                f"equal degree {d1} and equal maximal abelian subfield {l1}")
        return AnabelomorphismVerdict(
            NOT_ANABELOMORPHIC, d1, d2, l1, l2,
            "maximal abelian subfields differ")
    return AnabelomorphismVerdict(
        UNDECIDED, d1, d2, l1 or "?", l2 or "?",
        "; ".join(w for w in (why1, why2) if "undecided" in w) or
        "maximal abelian subfield not certified")


def partition_classes(specs, prec=None):
    """Partition specs into anabelomorphism classes by pairwise testing.

    Returns (classes, flags): classes is a list of lists of indices into
    ``specs``; flags[i] is True when spec i stayed a singleton only
    because some comparison was UNDECIDED.
    """
    n = len(specs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    undecided = [False] * n
    for i in range(n):
        for j in range(i + 1, n):
            verdict = jarden_ritter(specs[i], specs[j], prec=prec)
            if verdict.status == ANABELOMORPHIC:
                parent[find(i)] = find(j)
            elif verdict.status == UNDECIDED:
                undecided[i] = undecided[j] = True
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    classes = sorted(groups.values(), key=lambda g: g[0])
    flags = [len(groups[find(i)]) == 1 and undecided[i] for i in range(n)]
    return classes, flags


def peu_tres_classify(spec):
    """PEU if the radicand valuation over the maximal unramified
    subextension is divisible by p, TRES otherwise (r = 1 scope)."""
    if spec.r != 1:
        raise ValueError("peu/tres classification applies to r = 1")
    if spec.radicand is None:
        raise ValueError("no Kummer radicand to classify")
    if isinstance(spec.radicand, (int, Fraction)):
        q = Fraction(spec.radicand)
        v = _vp(q.numerator, spec.p) - _vp(q.denominator, spec.p)
    else:
        raise ValueError("radicand is not in the unramified level")
    return PEU if v % spec.p == 0 else TRES


# ----------------------------------------------------------------------
# rационalization via Krasner's lemma


def krasner_rationalize(coeffs, height_bound=10 ** 60):
    """Replace a monic p-adic polynomial by a nearby rational one that
    generates the same completion.

    ``coeffs``: PadicScalar coefficients, low degree first, including the
    leading 1.  Closeness beyond deg * (pairwise root distance bound)
    forces every root of the output to single out a unique root of the
    input within Krasner range, so the generated fields agree.

    Returns (integer coefficient list, certificate dict).
    """
    if not coeffs:
        raise ValueError("empty polynomial")
    lead = coeffs[-1]
    if lead.is_bottom or lead.valuation() != 0 or lead.unit % lead.p ** min(lead.prec, 1) != 1:
        raise ValueError("polynomial must be monic")
    p = lead.p
    deg = len(coeffs) - 1
    for c in coeffs[:-1]:
        if not c.is_bottom and c.valuation() < 0:
            raise ValueError("coefficients must be integral")
    disc = _padic_poly_disc(coeffs)
    if disc.is_bottom:
        raise PrecisionError("discriminant is zero to precision: "
                             "polynomial not separable at this precision")
    vdisc = disc.valuation()
    root_bound = Fraction(vdisc, 2)       # v(r_i - r_j) <= v(disc)/2
    threshold = deg * root_bound
    floor_target = int(threshold) + 2     # strictly exceeds the threshold
    avail = min(c.prec + c.valuation() for c in coeffs if not c.is_bottom)
    if avail < floor_target:
        raise PrecisionError(
            "coefficients are not known beyond the Krasner threshold")
    out = []
    attained = []
    for c in coeffs:
        if c.is_bottom:
            out.append(0)
            attained.append(c.vbound)
            continue
        lift = None
        for target in (max(avail, floor_target), floor_target):
            pk = p ** target
            cand = (c.unit * p ** c.valuation()) % pk
            if cand > pk // 2:
                cand -= pk
            if abs(cand) <= height_bound:
                lift = cand
                break
        if lift is None:
            raise ValueError(
                f"no rational approximant of height <= {height_bound} at "
                f"the required closeness p^{floor_target}")
        diff = c - PadicScalar.from_int(lift, p, c.prec) if lift else c
        attained.append(diff.vbound if diff.is_bottom else diff.valuation())
        out.append(lift)
    att = min(attained)
    if not att > threshold:
        raise ArithmeticError("achieved closeness does not exceed the threshold")
    vdisc_out = _integer_poly_disc_valuation(out, p)
    cert = {
        "p": p,
        "degree": deg,
        "root_distance_bound": root_bound,
        "threshold": threshold,
        "attained_closeness": att,
        "disc_valuation_input": vdisc,
        "disc_valuation_output": vdisc_out,
        "disc_valuations_match": vdisc_out == vdisc,
    }
    if not cert["disc_valuations_match"]:
        raise ArithmeticError(
            "discriminant valuation changed under rationalization: "
            f"{vdisc} -> {vdisc_out}")
    return out, cert


def _padic_poly_disc(coeffs):
    """disc = res(f, f') / lc up to sign; computed over PadicScalar."""
    deg = len(coeffs) - 1
    dcoeffs = [coeffs[i] * i for i in range(1, len(coeffs))]
    return _padic_resultant(coeffs, dcoeffs)


def _padic_resultant(f, g):
    """Sylvester determinant with minimal-valuation pivoting."""
    n, m = len(f) - 1, len(g) - 1
    N = n + m
    p = f[-1].p
    prec = min(c.prec for c in f + g if not c.is_bottom)
    rows = []
    for i in range(m):
        row = [PadicScalar.bottom(p)] * i + list(f) + \
            [PadicScalar.bottom(p)] * (N - n - i - 1)
        rows.append(row[:N])
    for i in range(n):
        row = [PadicScalar.bottom(p)] * i + list(g) + \
            [PadicScalar.bottom(p)] * (N - m - i - 1)
        rows.append(row[:N])
    det = PadicScalar.from_int(1, p, prec)
    for k in range(N):
        piv, pv = None, None
        for i in range(k, N):
            c = rows[i][k]
            if not c.is_bottom:
                if pv is None or c.valuation() < pv:
                    piv, pv = i, c.valuation()
        if piv is None:
            return PadicScalar.bottom(p)
        rows[k], rows[piv] = rows[piv], rows[k]
        det = det * rows[k][k]
        inv = rows[k][k].inv()
        for i in range(k + 1, N):
            c = rows[i][k]
            if not c.is_bottom:
                fac = c * inv
                rows[i] = [a - fac * b for a, b in zip(rows[i], rows[k])]
    return det


def _integer_poly_disc_valuation(coeffs, p):
    """v_p of the discriminant of an integer polynomial (exact resultant)."""
    f = [Fraction(c) for c in coeffs]
    g = [Fraction(i * coeffs[i]) for i in range(1, len(coeffs))]
    n, m = len(f) - 1, len(g) - 1
    N = n + m
    rows = []
    for i in range(m):
        rows.append([Fraction(0)] * i + f + [Fraction(0)] * (N - n - i - 1))
    for i in range(n):
        rows.append([Fraction(0)] * i + g + [Fraction(0)] * (N - m - i - 1))
    det = Fraction(1)
    for k in range(N):
        piv = next((i for i in range(k, N) if rows[i][k] != 0), None)
        if piv is None:
            raise ArithmeticError("degenerate rational polynomial")
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            det = -det
        det *= rows[k][k]
        inv = 1 / rows[k][k]
        for i in range(k + 1, N):
            if rows[i][k]:
                fac = rows[i][k] * inv
                rows[i] = [a - fac * b for a, b in zip(rows[i], rows[k])]
    return _vp(det.numerator, p) - _vp(det.denominator, p)
