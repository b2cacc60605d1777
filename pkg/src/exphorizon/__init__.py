"""Planning in weighted graphs when the stopping time is uncertain."""
from .core import FinitePath, GraphError, InvalidPathError, Lasso, WeightedGraph, utility_sequence
from .fixed_horizon import best_stationary, build_np_gadget, maxplus_power_value, value_iteration
from .specified import StoppingDistribution, expected_utility, specified_value
from .adversarial import adversarial_value, decide_threshold, exists_positive_path

__all__ = [
    "FinitePath", "GraphError", "InvalidPathError", "Lasso", "WeightedGraph", "utility_sequence",
    "best_stationary", "build_np_gadget", "maxplus_power_value", "value_iteration",
    "StoppingDistribution", "expected_utility", "specified_value",
    "adversarial_value", "decide_threshold", "exists_positive_path",
]
