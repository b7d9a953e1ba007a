from enum import Enum

class EtaSchedule(Enum):
    CONSTANT = "constant"
    POWER    = "power"
