"""EPR beam-pair sources and the Duan inseparability witness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .noise import FieldState, NoiseBasis, Quad, field_from_mode, lincomb, variance
from .optics import beam_splitter, phase_modulate, phase_shift, psa_type2_pair

# Separable bound on the Duan sum in our units (vacuum variance 1 per
# quadrature): two independent vacua contribute 2 + 2.
DUAN_SEPARABLE_BOUND = 4.0


class EprSource(Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"


@dataclass(frozen=True)
class EprPair:
    """Two beams whose joint quadratures fluctuate below the separable bound."""

    beam1: FieldState
    beam2: FieldState
    source: EprSource
    r: float
    modulation: Optional[int] = None  # shared classical mode id, if modulated


def epr_type1(basis: NoiseBasis, r: float, v_m: float = 0.0) -> EprPair:
    """Entangled pair from two amplitude-squeezed beams on a 1:1 beam splitter.

    The beams interfere with a pi/2 relative phase and the outputs are
    rotated by -/+ pi/4; this is the convention under which the pair feeds
    the share equations with the published coefficient structure.  The pair
    always carries a shared classical modulation mode (variance v_m, which
    may be 0): anticorrelated in X+, correlated in X-.
    """
    if r < 0 or v_m < 0:
        raise ValueError("squeezing and modulation power must be nonnegative")
    sq1 = field_from_mode(basis, basis.squeezed(r))
    sq2 = field_from_mode(basis, basis.squeezed(r))
    out1, out2 = beam_splitter(sq1, sq2, 0.5, phase=math.pi / 2)
    beam1 = phase_shift(out1, -math.pi / 4)
    beam2 = phase_shift(out2, math.pi / 4)
    mod = basis.modulation(v_m)
    beam1 = phase_modulate(beam1, mod, +1)
    beam2 = phase_modulate(beam2, mod, -1)
    return EprPair(beam1, beam2, EprSource.TYPE1, r, mod)


def epr_type2(basis: NoiseBasis, r: float) -> EprPair:
    """Entangled signal/idler pair from a single type-II parametric interaction.

    Uses the pump-phase-flipped interaction (r -> -r) so that the correlated
    combinations are X+_1 + X+_2 and X-_1 - X-_2, i.e. the ones entering the
    Duan witness.
    """
    if r < 0:
        raise ValueError("interaction parameter must be nonnegative")
    sig = field_from_mode(basis, basis.vacuum())
    idl = field_from_mode(basis, basis.vacuum())
    beam1, beam2 = psa_type2_pair(sig, idl, -r)
    return EprPair(beam1, beam2, EprSource.TYPE2, r)


def duan_sum(pair: EprPair) -> float:
    """<(dX+_1 + dX+_2)^2> + <(dX-_1 - dX-_2)^2>.

    Below DUAN_SEPARABLE_BOUND the pair is inseparable; both source types
    give exactly 4 exp(-2r) regardless of modulation, which cancels in both
    combinations.
    """
    plus_sum = lincomb([(1.0, pair.beam1), (1.0, pair.beam2)])
    minus_diff = lincomb([(1.0, pair.beam1), (-1.0, pair.beam2)])
    return variance(plus_sum, Quad.PLUS) + variance(minus_diff, Quad.MINUS)


def duan_sum_normalized(pair: EprPair) -> float:
    """Duan sum divided by the separable bound; < 1 means entangled.

    Useful for comparing against statements made in vacuum-variance-1/2
    units, where the bound is quoted as 2 instead of 4.
    """
    return duan_sum(pair) / DUAN_SEPARABLE_BOUND


def is_entangled(pair: EprPair) -> bool:
    return duan_sum(pair) < DUAN_SEPARABLE_BOUND - 1e-9
