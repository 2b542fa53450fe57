"""JSON run configuration: field, bijections, and the Laurent series L_i.

Example::

    {
      "field": {"b": 2},
      "bijections": "identity",
      "L": ["quadratic-fixture", {"num": [1], "den": [1, 0, 1]}],
      "precision": 32,
      "caps": {"G": 1048576, "Lambda": 65536},
      "a_max": 256
    }

Each entry of "L" is one of

* ``"quadratic-fixture"``: the root of L^2 + zL + 1 = 0 over F_2 with w = 1;
* ``{"quadratic": [c_0, c_1, ...]}``: the root of L^2 + c(z) L + 1 = 0 with
  leading index deg c;
* ``{"num": [...], "den": [...]}``: a rational function, coefficients low to
  high;
* ``{"w": int, "coeffs": [...], "exact": bool}``: explicit coefficients.

Series are expanded lazily to whatever length an operation needs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import DomainError, PrecisionError
from .finite_field import BijectionFamily, FieldSpec
from .laurent import LaurentSeries, Poly, laurent_from_quadratic_L, laurent_from_rational, quadratic_root
from .sequences import DigitalSequence, KroneckerSystem
from .walsh import G_CAP, LAMBDA_CAP


@dataclass(frozen=True)
class LSource:
    """A recipe producing a Laurent series known below any requested index."""

    kind: str
    data: Any = None

    @classmethod
    def from_json(cls, F: FieldSpec, item) -> "LSource":
        if item == "quadratic-fixture":
            if F.b != 2:
                raise DomainError("the quadratic fixture needs b = 2")
            return cls("fixture")
        if not isinstance(item, dict):
            raise DomainError(f"cannot read a Laurent series from {item!r}")
        if "quadratic" in item:
            c = Poly(tuple(F.element(x) for x in item["quadratic"]))
            if c.degree < 1:
                raise DomainError("quadratic coefficient c(z) needs degree >= 1")
            return cls("quadratic", c)
        if "num" in item or "den" in item:
            num = Poly(tuple(F.element(x) for x in item.get("num", [])))
            den = Poly(tuple(F.element(x) for x in item.get("den", [])))
            if den.is_zero():
                raise DomainError("rational series with zero denominator")
            return cls("rational", (num, den))
        if "coeffs" in item:
            exact = bool(item.get("exact", True))
            coeffs = tuple(F.element(x) for x in item["coeffs"])
            w = int(item.get("w", 1))
            return cls("explicit", LaurentSeries(w, coeffs, None if exact else w + len(coeffs)))
        raise DomainError(f"unrecognised Laurent series entry {item!r}")

    def series(self, F: FieldSpec, end: int) -> LaurentSeries:
        """The series with every coefficient of index < end known."""
        if self.kind == "fixture":
            return laurent_from_quadratic_L(F, max(1, end - 1))
        if self.kind == "quadratic":
            return quadratic_root(F, self.data, max(1, end - self.data.degree))
        if self.kind == "rational":
            num, den = self.data
            if num.is_zero():
                return LaurentSeries.zero()
            w = den.degree - num.degree
            return laurent_from_rational(F, num, den, max(1, end - w))
        L = self.data
        if L.end is not None and L.end < end:
            raise PrecisionError(f"explicit series known below index {L.end}, need {end}")
        return L


@dataclass(frozen=True)
class RunConfig:
    field: FieldSpec
    bijections: BijectionFamily
    sources: tuple[LSource, ...]
    precision: int = 32
    caps: dict = field(default_factory=lambda: {"G": G_CAP, "Lambda": LAMBDA_CAP})
    a_max: int = 256

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        if "field" not in data or "L" not in data:
            raise DomainError("config needs 'field' and 'L'")
        F = FieldSpec.from_json(data["field"])
        bij = BijectionFamily.from_json(F, data.get("bijections", "identity"))
        sources = tuple(LSource.from_json(F, item) for item in data["L"])
        if not sources:
            raise DomainError("config lists no Laurent series")
        if "s" in data and int(data["s"]) != len(sources):
            raise DomainError(f"s = {data['s']} but {len(sources)} series given")
        caps = {"G": G_CAP, "Lambda": LAMBDA_CAP}
        caps.update({k: int(v) for k, v in data.get("caps", {}).items()})
        precision = int(data.get("precision", 32))
        if precision < 1:
            raise DomainError("precision must be positive")
        return cls(F, bij, sources, precision, caps, int(data.get("a_max", 256)))

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_json(data)

    @property
    def s(self) -> int:
        return len(self.sources)

    @property
    def b(self) -> int:
        return self.field.b

    def system(self, end: int) -> KroneckerSystem:
        """Kronecker system with each L_i known below index ``end``."""
        return KroneckerSystem(self.field, tuple(src.series(self.field, end) for src in self.sources), self.bijections)

    def digital(self, rows: int, cols: int) -> DigitalSequence:
        """The same sequence through Hankel matrices of the given size."""
        return self.system(rows + cols).digital(rows, cols)
