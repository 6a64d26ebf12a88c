"""Three-valued verdicts returned by the checkers."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Dict, Optional


class Result(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    result: Result
    witness: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if self.result is Result.NO and self.witness is None:
            raise ValueError("a No verdict needs a witness")

    @property
    def yes(self) -> bool:
        return self.result is Result.YES

    @property
    def no(self) -> bool:
        return self.result is Result.NO

    @property
    def unknown(self) -> bool:
        return self.result is Result.UNKNOWN

    def __str__(self):
        return self.result.value


YES = Verdict(Result.YES)
