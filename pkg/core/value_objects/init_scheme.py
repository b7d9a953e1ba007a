from dataclasses import dataclass
from typing import Optional

from core.enum.init_kind import InitKind
from core.exceptions.domain_exceptions import InvalidConfig


@dataclass(frozen=True)
class InitScheme:
    """
    Random initialization law of a network.

    Attributes:
        kind (InitKind): uniform_fanin, uniform_custom or stratified_knots.
        a_w1 (float): half-width of the w1 range (uniform_custom).
        a_b1 (float): half-width of the b1 range (uniform_custom).
        a_w2 (float | None): half-width of the w2 and b2 range (uniform_custom);
            1/sqrt(k) when omitted.
        knot_range (float): knots are spread over [-knot_range, knot_range]
            (stratified_knots).
    """
    kind: InitKind = InitKind.UNIFORM_FANIN
    a_w1: float = 1.0
    a_b1: float = 1.0
    a_w2: Optional[float] = None
    knot_range: float = 0.5

    def __post_init__(self):
        if not isinstance(self.kind, InitKind):
            object.__setattr__(self, "kind", InitKind(self.kind))
        for name in ("a_w1", "a_b1", "knot_range"):
            if not getattr(self, name) > 0:
                raise InvalidConfig(f"Init range {name} must be positive, got {getattr(self, name)!r}.")
        if self.a_w2 is not None and not self.a_w2 > 0:
            raise InvalidConfig(f"Init range a_w2 must be positive, got {self.a_w2!r}.")
