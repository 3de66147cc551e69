from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class AmplitudeSolution:
    """Asymptotic amplitudes of incident (A), reflected (B), transmitted (D) waves.

    refl = |B|^2/|A|^2 and trans = |D|^2/|A|^2.
    """

    ampA: complex
    ampB: complex
    ampD: complex
    refl: float
    trans: float

    @classmethod
    def from_amplitudes(cls, ampA: complex, ampB: complex, ampD: complex = 1.0):
        norm = abs(ampA) ** 2
        return cls(
            ampA=complex(ampA),
            ampB=complex(ampB),
            ampD=complex(ampD),
            refl=abs(ampB) ** 2 / norm,
            trans=abs(ampD) ** 2 / norm,
        )

    @property
    def unitarity_defect(self) -> float:
        return abs(self.refl + self.trans - 1.0)
