from enum import Enum

class LowerBoundMode(Enum):
    PLAIN_MIDDLE    = "plain_middle"
    WEIGHTED_MIDDLE = "weighted_middle"
