from enum import Enum

class OptimizedMode(Enum):
    VS_GROUND_TRUTH = "vs_ground_truth"
    VS_SIGMA        = "vs_sigma"
