from enum import Enum

class Design(Enum):
    HAT            = "hat"
    COUNTEREXAMPLE = "counterexample"
    CUSTOM_FILE    = "custom_file"
