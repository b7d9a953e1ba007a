from enum import Enum

class InitKind(Enum):
    UNIFORM_FANIN    = "uniform_fanin"
    UNIFORM_CUSTOM   = "uniform_custom"
    STRATIFIED_KNOTS = "stratified_knots"
