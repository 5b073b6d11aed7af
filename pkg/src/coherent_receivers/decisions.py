from enum import IntEnum


class Decision(IntEnum):
    """Receiver verdict. Integer values double as vectorized decision codes."""

    GUESS_MINUS = -1
    INCONCLUSIVE = 0
    GUESS_PLUS = 1
