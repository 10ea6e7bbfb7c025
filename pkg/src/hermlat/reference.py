"""Published reference values and a checker that recomputes each of them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .classgroup import Guarantee, class_group, equality_guarantee
from .field import field_from_discriminant
from .genus import GenusSym, list_genera, partial_mass, total_mass

__all__ = ["Check", "CheckResult", "CLASSIFICATION", "D_MAX", "reference_checks", "run_checks"]


# single-class genera of rank >= 2, by discriminant; "a" is the nontrivial ideal genus
CLASSIFICATION = {
    -3: ["I_2[o]", "I_3[o]", "I_4[o]", "I_5[o]"],
    -4: ["I_2[o]", "I_3[o]", "I_4[o]", "II_4[o]"],
    -7: ["I_2[o]"],
    -8: ["I_2[o]", "II_2[o]"],
    -20: ["I_2[a]"],
    -24: ["II_2[o]", "II_2[a]"],
    -40: ["II_2[o]", "II_2[a]"],
    -88: ["II_2[a]"],
}

D_MAX = {2: 312, 3: 16, 4: 8, 5: 7, 6: 4, 7: 3}


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    compute: Callable[[], object]


@dataclass(frozen=True)
class CheckResult:
    name: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def _genus(d_K: int, parity: str, n: int, principal: bool) -> GenusSym:
    F = field_from_discriminant(d_K)
    for G in list_genera(F, n):
        if G.parity == parity and G.is_principal_genus == principal:
            return G
    raise LookupError(f"no {parity} genus of rank {n} over {d_K}")


def _masses(d_K: int, n: int, parity: str, kind: str) -> list[Fraction]:
    F = field_from_discriminant(d_K)
    CG = class_group(F)
    fn = partial_mass if kind == "partial" else (lambda G: total_mass(G, CG))
    return sorted(fn(G) for G in list_genera(F, n) if G.parity == parity)


def _classification() -> dict[int, list[str]]:
    """Certified genera, with any nontrivial ideal genus written as "a"."""
    from .search import full_search

    out: dict[int, list[str]] = {}
    for r in full_search().certified():
        coset = "o" if r.coset == "o" else "a"
        out.setdefault(r.d_K, []).append(f"{'I' if r.parity == 'odd' else 'II'}_{r.n}[{coset}]")
    return {d: sorted(v) for d, v in out.items()}


def reference_checks() -> list[Check]:
    from .search import refined_d_max

    F = Fraction
    checks = [
        Check("mass d_K=-47 n=4 odd partial", F(221, 8), lambda: partial_mass(_genus(-47, "odd", 4, True))),
        Check("mass d_K=-47 n=4 odd total", F(1105, 8), lambda: total_mass(_genus(-47, "odd", 4, True))),
        Check("mass d_K=-95 n=3 partials", [F(35, 2)] * 2, lambda: _masses(-95, 3, "odd", "partial")),
        Check("mass d_K=-95 n=3 totals", [F(70)] * 2, lambda: _masses(-95, 3, "odd", "total")),
        Check("mass d_K=-852 n=2 odd partials", sorted([F(35, 4), F(9), F(35, 2), F(18)]),
              lambda: _masses(-852, 2, "odd", "partial")),
        Check("mass d_K=-852 n=2 odd totals", sorted([F(35, 2), F(18), F(35), F(36)]),
              lambda: _masses(-852, 2, "odd", "total")),
        Check("mass d_K=-852 n=2 even partials", sorted([F(6), F(35, 3)]),
              lambda: _masses(-852, 2, "even", "partial")),
        Check("mass d_K=-852 n=2 even totals", sorted([F(12), F(70, 3)]),
              lambda: _masses(-852, 2, "even", "total")),
        Check("mass d_K=-39 n=4 odd partial, principal genus", F(935, 72),
              lambda: partial_mass(_genus(-39, "odd", 4, True))),
        Check("mass d_K=-39 n=4 odd partial, other genus", F(154, 15),
              lambda: partial_mass(_genus(-39, "odd", 4, False))),
    ]
    for d_K, shape in [(-47, "Z/5"), (-95, "Z/8"), (-852, "Z/4 x Z/2"), (-39, "Z/4"), (-23, "Z/3"), (-83, "Z/3")]:
        checks.append(Check(f"class group d_K={d_K}", shape,
                            lambda d=d_K: class_group(field_from_discriminant(d)).structure_string()))
    for n, val in D_MAX.items():
        checks.append(Check(f"d_max({n})", val, lambda n=n: refined_d_max(n)))
    checks.append(Check("equality guarantee d_K=-39 n=4", Guarantee.NONE,
                        lambda: equality_guarantee(class_group(field_from_discriminant(-39)), 4)))
    checks.append(Check("equality guarantee d_K=-47 n=4", Guarantee.ALL_CLASSES,
                        lambda: equality_guarantee(class_group(field_from_discriminant(-47)), 4)))
    checks.append(Check("single-class classification",
                        {d: sorted(v) for d, v in CLASSIFICATION.items()}, _classification))
    return checks


def run_checks() -> list[CheckResult]:
    return [CheckResult(c.name, c.expected, c.compute()) for c in reference_checks()]
