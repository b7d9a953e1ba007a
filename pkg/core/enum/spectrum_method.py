from enum import Enum

class SpectrumMethod(Enum):
    DENSE = "dense"
    POWER = "power"
    AUTO  = "auto"
