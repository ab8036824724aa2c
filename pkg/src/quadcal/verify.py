"""Executable checks of the cycle-count congruences, their period-length forms and the pq conjecture.

Each ``thm_*`` / ``cor_*`` function returns VerdictRecords (or ``[]`` when the
parameters fail the precondition, which callers count as a skip). Predictions
use only residues and symbols of p and q; computed values come from the
enumeration engine through a ``source`` callable mapping D to a CacheRecord.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .arith import is_discriminant, is_prime, kronecker, two_squares
from .cache import CacheRecord, compute_record
from .enumeration import classes, profile
from .surd import (
    Shape,
    ambiguous_shape,
    canonical_rotation,
    expand,
    literal_shape,
    make_surd,
    reverse_conjugate,
    sqrt_surd,
    to_poly,
)
from .units import class_number_formula, conductor_split, fundamental_unit

Source = Callable[[int], CacheRecord]

THEOREM_IDS = (
    "3.1", "3.2", "3.3", "3.4", "3.5", "3.6", "3.7", "3.8", "3.9", "3.10", "3.11",
    "cor-3.6", "cor-3.7", "cor-3.8", "cor-3.9", "cor-3.10", "3.2+3.9",
)
DISCRIMINANT_IDS = ("lemma-2.3", "lemma-2.5", "prop-2.1", "prop-2.4")
ALL_IDS = THEOREM_IDS + DISCRIMINANT_IDS

# Advisory ids for the cor-3.7 variants: the sqrt(3p) reading and the length-6 claim at p = 5.
COR_3_7_LITERAL = "cor-3.7-literal"
COR_3_7_LENGTH_CLAIM = "cor-3.7-l45"


@lru_cache(maxsize=4096)
def default_source(D: int) -> CacheRecord:
    return compute_record(D)


@dataclass
class VerdictRecord:
    theorem_id: str
    params: dict
    D: int
    predicted_mod4: int | None
    computed: int | None
    computed_mod4: int | None
    passed: bool
    advisory: bool = False  # reported, never counted as pass or failure
    note: str = ""

    @property
    def p(self) -> int | None:
        return self.params.get("p")

    @property
    def q(self) -> int | None:
        return self.params.get("q")

    def sort_key(self) -> tuple:
        return (self.theorem_id, self.p or 0, self.q or 0, self.D)

    def to_json(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "params": self.params,
            "D": self.D,
            "predicted_mod4": self.predicted_mod4,
            "computed": self.computed,
            "computed_mod4": self.computed_mod4,
            "pass": self.passed,
            "advisory": self.advisory,
            "note": self.note,
        }

    def csv_row(self) -> list:
        def cell(v):
            return "" if v is None else v
        return [self.theorem_id, cell(self.p), cell(self.q), self.D,
                cell(self.predicted_mod4), cell(self.computed),
                cell(self.computed_mod4), str(self.passed).lower()]


VERDICT_CSV_HEADER = ["theorem_id", "p", "q", "D", "predicted_mod4", "computed",
                      "computed_mod4", "pass"]


def _verdict(tid: str, params: dict, D: int, predicted: int, computed: int,
             **kw) -> VerdictRecord:
    predicted %= 4
    return VerdictRecord(tid, params, D, predicted, computed, computed % 4,
                         computed % 4 == predicted, **kw)


def _prime(p: int, residue: int | None = None, modulus: int = 4) -> bool:
    return is_prime(p) and (residue is None or p % modulus == residue)


def _l(w) -> int:
    return len(expand(w, "plus").period)


# --- single-prime theorems -------------------------------------------------

def thm_3_1(p: int, source: Source = default_source) -> list[VerdictRecord]:
    """kappa+(8p) = 1 - (-1)^x_p (mod 4) for p = 1 (mod 4)."""
    if not _prime(p, 1):
        return []
    x, y = two_squares(p)
    predicted = 1 - (-1) ** x
    return [_verdict("3.1", {"p": p, "x_p": x, "y_p": y}, 8 * p, predicted,
                     source(8 * p).kappa_plus)]


def thm_3_4(p: int, source: Source = default_source) -> list[VerdictRecord]:
    """kappa(p) - kappa(4p) = 2 (p = 1 mod 8) or 0 (p = 5 mod 8)."""
    if not _prime(p, 1):
        return []
    predicted = 2 if p % 8 == 1 else 0
    k_p, k_4p = source(p).kappa, source(4 * p).kappa
    return [_verdict("3.4", {"p": p, "kappa_p": k_p, "kappa_4p": k_4p}, 4 * p,
                     predicted, k_p - k_4p)]


def thm_3_5(p: int, source: Source = default_source) -> list[VerdictRecord]:
    if not _prime(p, 1):
        return []
    predicted = 2 if p % 8 == 1 else 0
    return [_verdict("3.5", {"p": p}, 8 * p, predicted, source(8 * p).kappa)]


def thm_3_6(p: int, source: Source = default_source) -> list[VerdictRecord]:
    """kappa(4p) = kappa(8p) = 2 (p = 3 mod 8) or 0 (p = 7 mod 8)."""
    if not _prime(p, 3):
        return []
    predicted = 2 if p % 8 == 3 else 0
    return [_verdict("3.6", {"p": p}, D, predicted, source(D).kappa)
            for D in (4 * p, 8 * p)]


def cor_3_6(p: int, source: Source = default_source) -> list[VerdictRecord]:
    if not _prime(p, 3):
        return []
    predicted = 2 if p % 8 == 3 else 0
    return [
        _verdict("cor-3.6", {"p": p, "surd": f"sqrt({p})"}, 4 * p, predicted,
                 _l(sqrt_surd(p))),
        _verdict("cor-3.6", {"p": p, "surd": f"sqrt({2 * p})"}, 8 * p, predicted,
                 _l(sqrt_surd(2 * p))),
    ]


def _pred_3_7(p: int) -> int:
    return 2 if p == 5 or p % 3 == 1 else 0


def thm_3_7(p: int, source: Source = default_source) -> list[VerdictRecord]:
    if not _prime(p, 1):
        return []
    return [_verdict("3.7", {"p": p}, 9 * p, _pred_3_7(p), source(9 * p).kappa)]


def cor_3_7(p: int, source: Source = default_source) -> list[VerdictRecord]:
    """Period length of (1 + sqrt(9p))/2, plus two advisory variants.

    The counted check uses sqrt(9p), the discriminant of the 3.7 congruence.
    The sqrt(3p) reading and the length-6 claim for (1 + sqrt 45)/2 are
    evaluated and reported as advisory records.
    """
    if not _prime(p, 1):
        return []
    predicted = _pred_3_7(p)
    out = [_verdict("cor-3.7", {"p": p, "surd": f"(1+sqrt({9 * p}))/2"}, 9 * p,
                    predicted, _l(make_surd(1, 2, 9 * p)))]
    literal = make_surd(2, 4, 12 * p)  # (1 + sqrt(3p))/2
    out.append(_verdict(COR_3_7_LITERAL, {"p": p, "surd": f"(1+sqrt({3 * p}))/2"},
                        literal.D, predicted, _l(literal), advisory=True,
                        note="sqrt(3p) reading; not implied by the 9p congruence"))
    if p == 5:
        length = _l(make_surd(1, 2, 45))
        out.append(VerdictRecord(
            COR_3_7_LENGTH_CLAIM, {"p": 5, "surd": "(1+sqrt(45))/2", "claimed": 6},
            45, 6 % 4, length, length % 4, length == 6, advisory=True,
            note=f"claimed period length 6, computed {length}; same residue mod 4"))
    return out


def _pred_3_8(p: int) -> int:
    return 2 if p == 3 or p % 4 == 1 else 0


def thm_3_8(p: int, source: Source = default_source) -> list[VerdictRecord]:
    if p <= 2 or not _prime(p):
        return []
    return [_verdict("3.8", {"p": p}, 16 * p, _pred_3_8(p), source(16 * p).kappa)]


def cor_3_8(p: int, source: Source = default_source) -> list[VerdictRecord]:
    if p <= 2 or not _prime(p):
        return []
    return [_verdict("cor-3.8", {"p": p, "surd": f"2*sqrt({p})"}, 16 * p,
                     _pred_3_8(p), _l(make_surd(0, 2, 16 * p)))]


# --- two-prime theorems ----------------------------------------------------

def _both_3mod4(p: int, q: int) -> bool:
    return p < q and _prime(p, 3) and _prime(q, 3)


def thm_3_2(p: int, q: int, source: Source = default_source) -> list[VerdictRecord]:
    """kappa+(pq) = 1 - (q|p) (mod 4)."""
    if not _both_3mod4(p, q):
        return []
    leg = kronecker(q, p)
    return [_verdict("3.2", {"p": p, "q": q, "legendre_qp": leg}, p * q, 1 - leg,
                     source(p * q).kappa_plus)]


def thm_3_3(p: int, q: int, source: Source = default_source) -> list[VerdictRecord]:
    if not _both_3mod4(p, q):
        return []
    return [_verdict("3.3", {"p": p, "q": q}, 4 * p * q, 2, source(4 * p * q).kappa_plus)]


def thm_3_9(p: int, q: int, source: Source = default_source) -> list[VerdictRecord]:
    if not _both_3mod4(p, q):
        return []
    leg = kronecker(q, p)
    return [_verdict("3.9", {"p": p, "q": q, "legendre_qp": leg}, p * q, 1 + leg,
                     source(p * q).kappa)]


def thm_3_10(p: int, q: int, source: Source = default_source) -> list[VerdictRecord]:
    if not _both_3mod4(p, q):
        return []
    leg = kronecker(q, p)
    return [_verdict("3.10", {"p": p, "q": q, "legendre_qp": leg}, 4 * p * q, 1 + leg,
                     source(4 * p * q).kappa)]


def thm_3_11(p: int, q: int, source: Source = default_source) -> list[VerdictRecord]:
    """kappa(4pq) = 0 (mod 4) for p = 1, q = 3 (mod 4); no ordering between p and q."""
    if not (_prime(p, 1) and _prime(q, 3)):
        return []
    return [_verdict("3.11", {"p": p, "q": q}, 4 * p * q, 0, source(4 * p * q).kappa)]


def cor_3_9(p: int, q: int, source: Source = default_source) -> list[VerdictRecord]:
    if not _both_3mod4(p, q):
        return []
    leg = kronecker(q, p)
    return [_verdict("cor-3.9", {"p": p, "q": q, "surd": f"(1+sqrt({p * q}))/2"},
                     p * q, 1 + leg, _l(make_surd(1, 2, p * q)))]


def cor_3_10(p: int, q: int, source: Source = default_source) -> list[VerdictRecord]:
    if not _both_3mod4(p, q):
        return []
    leg = kronecker(q, p)
    return [_verdict("cor-3.10", {"p": p, "q": q, "surd": f"sqrt({p * q})"},
                     4 * p * q, 1 + leg, _l(sqrt_surd(p * q)))]


def consistency_3_2_3_9(p: int, q: int, source: Source = default_source) -> list[VerdictRecord]:
    """kappa+(pq) + kappa(pq) = 2 (mod 4), implied jointly by the 3.2 and 3.9 congruences."""
    if not _both_3mod4(p, q):
        return []
    rec = source(p * q)
    return [_verdict("3.2+3.9", {"p": p, "q": q}, p * q, 2, rec.kappa_plus + rec.kappa)]


# --- per-discriminant checks -----------------------------------------------

def check_prop_2_1(D: int) -> bool:
    """|Q(D)| = sum of cycle lengths and |Q+(D)| = sum of cycle digit sums."""
    prof = profile(D)  # raises InvariantViolation itself on mismatch
    return (prof.kappa == sum(len(w) for w in prof.cycles_plus)
            and prof.kappa_plus == sum(sum(w) for w in prof.cycles_plus))


def check_lemma_2_3(D: int) -> bool:
    prof = profile(D)
    if D % 2:
        return all((len(w) - sum(w)) % 2 == 0 for w in prof.cycles_plus)
    eps = fundamental_unit(D, prof.plus)
    if eps.norm == -1:
        return all(sum(w) % 2 == 0 for w in prof.cycles_plus)
    return True


def check_lemma_2_5(D: int) -> bool:
    """Palindromic shapes of ambiguous cycles and the matching coefficient laws.

    A cycle is ambiguous when the cycle of -1/w' (w any member) equals it.
    Ambiguous cycles must have an odd palindromic period when N(eps_D) = -1 and
    an even or offset palindromic one when N(eps_D) = 1; non-ambiguous cycles
    have no palindromic rotation. For every member whose own period reads
    as a palindrome a = -c, and as [c0, palindrome] a | b.
    """
    plus = classes(D, "plus")
    eps = fundamental_unit(D, plus)
    for cy in plus:
        rev = reverse_conjugate(cy.members[0])
        rev_word = canonical_rotation(expand(rev, "plus").period)
        ambiguous = rev_word == cy.word
        shape = ambiguous_shape(cy.word)
        if ambiguous != (shape is not Shape.NONE):
            return False
        if ambiguous:
            allowed = ({Shape.ODD_PALINDROME} if eps.norm == -1
                       else {Shape.EVEN_PALINDROME, Shape.OFFSET_PALINDROME})
            if shape not in allowed:
                return False
        for i, w in enumerate(cy.members):
            word = cy.digits[i:] + cy.digits[:i]
            f = to_poly(w)
            lit = literal_shape(word)
            if lit in (Shape.ODD_PALINDROME, Shape.EVEN_PALINDROME) and f.a != -f.c:
                return False
            if lit is Shape.OFFSET_PALINDROME and f.b % f.a:
                return False
    return True


def check_prop_2_4(D: int, source: Source = default_source) -> bool:
    split = conductor_split(D)
    if split.f == 1:
        return True
    return class_number_formula(D, source(split.D0).h) == source(D).h


_D_CHECKS = {
    "prop-2.1": lambda D, source: check_prop_2_1(D),
    "lemma-2.3": lambda D, source: check_lemma_2_3(D),
    "lemma-2.5": lambda D, source: check_lemma_2_5(D),
    "prop-2.4": check_prop_2_4,
}


def check_discriminant(tid: str, D: int, source: Source = default_source) -> list[VerdictRecord]:
    """Property check on one discriminant; residue columns are left empty."""
    if not is_discriminant(D):
        return []
    ok = _D_CHECKS[tid](D, source)
    return [VerdictRecord(tid, {}, D, None, None, None, bool(ok))]


# --- dispatch --------------------------------------------------------------

SINGLE = {
    "3.1": thm_3_1, "3.4": thm_3_4, "3.5": thm_3_5, "3.6": thm_3_6, "3.7": thm_3_7,
    "3.8": thm_3_8, "cor-3.6": cor_3_6, "cor-3.7": cor_3_7, "cor-3.8": cor_3_8,
}
PAIR = {
    "3.2": thm_3_2, "3.3": thm_3_3, "3.9": thm_3_9, "3.10": thm_3_10, "3.11": thm_3_11,
    "cor-3.9": cor_3_9, "cor-3.10": cor_3_10, "3.2+3.9": consistency_3_2_3_9,
}


def primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


def tasks_for(tid: str, max_n: int) -> list[tuple]:
    """Every parameter tuple of ``tid`` with primes (or discriminants) <= max_n."""
    if tid == "all":
        return [t for sub in ALL_IDS for t in tasks_for(sub, max_n)]
    if tid in SINGLE:
        return [(tid, p) for p in primes_upto(max_n)]
    if tid in PAIR:
        ps = primes_upto(max_n)
        if tid == "3.11":  # p = 1, q = 3 (mod 4) in either order
            return [(tid, p, q) for p in ps for q in ps if p != q]
        return [(tid, p, q) for p in ps for q in ps if p < q]
    if tid in _D_CHECKS:
        return [(tid, D) for D in range(5, max_n + 1) if is_discriminant(D)]
    raise KeyError(tid)


def run_task(task: tuple, source: Source = default_source) -> list[VerdictRecord]:
    tid, *args = task
    if tid in SINGLE:
        return SINGLE[tid](*args, source=source)
    if tid in PAIR:
        return PAIR[tid](*args, source=source)
    return check_discriminant(tid, *args, source=source)


@dataclass
class Summary:
    checked: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    flagged: int = 0  # advisory records that did not hold
    advisory: int = 0

    def line(self) -> str:
        return f"{self.checked}/{self.passed}/{self.failed}/{self.skipped}"


def summarize(task_results: Iterable[list[VerdictRecord]]) -> Summary:
    s = Summary()
    for recs in task_results:
        counted = [r for r in recs if not r.advisory]
        if not counted:
            s.skipped += 1
        for r in recs:
            if r.advisory:
                s.advisory += 1
                s.flagged += not r.passed
                continue
            s.checked += 1
            if r.passed:
                s.passed += 1
            else:
                s.failed += 1
    return s


def reproduction_bundle(rec: VerdictRecord) -> dict:
    """Everything needed to re-derive a failed verdict by hand."""
    D = rec.D
    prof = profile(D)
    return {
        "verdict": rec.to_json(),
        "D": D,
        "Q": [w.to_json() for w in sorted(prof.reduced)],
        "Q_plus": [w.to_json() for w in sorted(prof.m_reduced)],
        "cycles_plus": [list(w) for w in prof.cycles_plus],
        "cycles_minus": [list(w) for w in prof.cycles_minus],
    }


# --- conjecture ------------------------------------------------------------

CONJECTURE_CSV_HEADER = [
    "p", "q", "x_p", "y_p", "x_q", "y_q", "legendre_qp", "unit_norm",
    "kappa_plus_mod4", "predicted_mod4", "cross_det_sign", "aux_equiv_holds", "pass",
]


@dataclass
class ConjectureRecord:
    p: int
    q: int
    x_p: int
    y_p: int
    x_q: int
    y_q: int
    legendre_qp: int
    unit_norm: int
    kappa_plus: int
    kappa_plus_mod4: int
    predicted_mod4: int
    cross_det_sign: int
    aux_condition: bool  # the length (norm -1) or kappa (norm +1) condition
    aux_equiv_holds: bool
    passed: bool
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {k: getattr(self, k) for k in CONJECTURE_CSV_HEADER[:-1]}
        d["pass"] = self.passed
        d["kappa_plus"] = self.kappa_plus
        d["aux_condition"] = self.aux_condition
        d.update(self.extra)
        return d

    def csv_row(self) -> list:
        row = [getattr(self, k) for k in CONJECTURE_CSV_HEADER[:-1]] + [self.passed]
        return [str(v).lower() if isinstance(v, bool) else v for v in row]


def conjecture_eligible(p: int, q: int) -> bool:
    if not (p < q and _prime(p, 1) and _prime(q, 1)):
        return False
    return (two_squares(p)[0] - two_squares(q)[0]) % 2 == 1


def conjecture_pairs(limit: int) -> list[tuple[int, int]]:
    ps = [p for p in primes_upto(limit) if p % 4 == 1]
    return [(p, q) for p in ps for q in ps if conjecture_eligible(p, q)]


def conjecture_record(p: int, q: int, source: Source = default_source) -> ConjectureRecord | None:
    """kappa+(pq) against 1 - (-1)^x_p (q|p), with the two side conditions.

    Norm -1: does l((1+sqrt pq)/2) = l((p+sqrt pq)/(2p)) (mod 4) coincide with
    x_p y_q - y_p x_q < 0? Norm +1: does kappa(pq) = 0 (mod 4) coincide with
    it? (p + sqrt pq)/(2p) is the discriminant-pq form of (1 + sqrt(q/p))/2.
    """
    if not conjecture_eligible(p, q):
        return None
    x_p, y_p = two_squares(p)
    x_q, y_q = two_squares(q)
    leg = kronecker(q, p)
    predicted = (1 - (-1) ** x_p * leg) % 4
    rec = source(p * q)
    cross = x_p * y_q - y_p * x_q
    extra: dict = {}
    if rec.unit_norm == -1:
        l1 = _l(make_surd(1, 2, p * q))
        l2 = _l(make_surd(p, 2 * p, p * q))
        cond = (l1 - l2) % 4 == 0
        extra = {"l_half": l1, "l_qp": l2}
    else:
        cond = rec.kappa % 4 == 0
        extra = {"kappa": rec.kappa}
    return ConjectureRecord(
        p=p, q=q, x_p=x_p, y_p=y_p, x_q=x_q, y_q=y_q, legendre_qp=leg,
        unit_norm=rec.unit_norm, kappa_plus=rec.kappa_plus,
        kappa_plus_mod4=rec.kappa_plus % 4, predicted_mod4=predicted,
        cross_det_sign=(cross > 0) - (cross < 0), aux_condition=cond,
        aux_equiv_holds=cond == (cross < 0), passed=rec.kappa_plus % 4 == predicted,
        extra=extra,
    )


def scan_conjecture(limit: int, source: Source = default_source) -> list[ConjectureRecord]:
    if limit < 13:
        raise ValueError("scan_conjecture needs limit >= 13")
    return [conjecture_record(p, q, source) for p, q in conjecture_pairs(limit)]


def contingency_tables(records: Iterable[ConjectureRecord]) -> dict[int, dict[tuple[bool, bool], int]]:
    """Counts of (aux_condition, cross_det < 0) split by unit norm."""
    tables: dict[int, dict[tuple[bool, bool], int]] = {
        n: {(a, b): 0 for a in (True, False) for b in (True, False)} for n in (-1, 1)}
    for r in records:
        tables[r.unit_norm][(r.aux_condition, r.cross_det_sign < 0)] += 1
    return tables
