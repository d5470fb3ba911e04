"""Built-in parameter registry.

Three cryptographic sets (the proposed 128/192/256-bit instances) and two
simulation-only sets used for error-weight studies.  The simulation sets
have no attached code; their truncation length matches the auxiliary-code
length of the corresponding legacy instantiation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .concat import ConcatCode
from .ring import validate_primitive_prime
from .rm import RmCode
from .rs import RsCode


@dataclass(frozen=True)
class HqcParams:
    name: str
    param_id: int               # single-byte id used in key/ciphertext files
    security_bits: int
    n: int
    w: int
    w_r: int
    w_e: int
    rm_multiplicity: int
    rs_length: int
    gain_percent: float         # size gain over the tensor-code instantiation
                                # (documentation only, never tested)

    def __post_init__(self):
        self.validate()

    @property
    def inner(self) -> RmCode:
        return RmCode(self.rm_multiplicity)

    @property
    def outer(self) -> RsCode:
        return RsCode(self.rs_length)

    @property
    def code(self) -> ConcatCode:
        return ConcatCode(self.outer, self.inner)

    @property
    def n1n2(self) -> int:
        return self.rs_length * 128 * self.rm_multiplicity

    @property
    def truncate_len(self) -> int:
        """Bits of the ring element that carry the codeword; the last
        l = n - n1n2 bits are noise only and are dropped before decoding."""
        return self.n1n2

    @property
    def l(self) -> int:
        return self.n - self.n1n2

    @property
    def delta(self) -> int:
        """Global correction-capacity parameter, read as the outer code's
        bounded-distance radius."""
        return self.outer.delta_e

    def validate(self) -> None:
        if not validate_primitive_prime(self.n):
            raise ValueError(f"n={self.n} is not a primitive prime")
        if self.n < self.n1n2:
            raise ValueError("ring length shorter than the codeword")
        for wname, w in (("w", self.w), ("w_r", self.w_r), ("w_e", self.w_e)):
            if not 0 < w <= self.n:
                raise ValueError(f"{wname}={w} out of range")


@dataclass(frozen=True)
class WeightSimParams:
    """Error-weight simulation set: ring and weights plus truncation, no code."""
    name: str
    n: int
    w: int
    w_r: int
    w_e: int
    truncate_len: int


PARAM_SETS: dict[str, HqcParams] = {
    p.name: p
    for p in (
        HqcParams("hqc-rmrs-128", 1, 128, 20533, 67, 77, 77,
                  rm_multiplicity=2, rs_length=80, gain_percent=16.8),
        HqcParams("hqc-rmrs-192", 2, 192, 38923, 101, 117, 117,
                  rm_multiplicity=4, rs_length=76, gain_percent=16.7),
        HqcParams("hqc-rmrs-256", 3, 256, 59957, 133, 153, 153,
                  rm_multiplicity=6, rs_length=78, gain_percent=15.4),
    )
}

SIM_SETS: dict[str, WeightSimParams] = {
    p.name: p
    for p in (
        WeightSimParams("sim-set-i", 23869, 67, 77, 77, 23746),
        WeightSimParams("sim-set-ii", 20533, 67, 77, 77, 20480),
    )
}


def get_params(name: str) -> HqcParams:
    try:
        return PARAM_SETS[name]
    except KeyError:
        raise KeyError(f"unknown parameter set {name!r}; "
                       f"known: {', '.join(PARAM_SETS)}") from None


def get_weight_set(name: str) -> WeightSimParams:
    """Weight-simulation view of any registered set."""
    if name in SIM_SETS:
        return SIM_SETS[name]
    if name in PARAM_SETS:
        p = PARAM_SETS[name]
        return WeightSimParams(p.name, p.n, p.w, p.w_r, p.w_e, p.truncate_len)
    known = ", ".join([*SIM_SETS, *PARAM_SETS])
    raise KeyError(f"unknown parameter set {name!r}; known: {known}")


def params_by_id(param_id: int) -> HqcParams:
    for p in PARAM_SETS.values():
        if p.param_id == param_id:
            return p
    raise KeyError(f"unknown parameter-set id {param_id}")
