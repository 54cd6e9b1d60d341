"""Online single-machine scheduling with restarts, minimizing the weighted makespan."""

from .adversaries import (figure1_instance, general_lb_adversary, tightness_instance,
                          unit_lb_adversary)
from .engine import simulate, simulate_adaptive
from .harness import FuzzConfig, adversary_report, fuzz, verify_constants
from .model import Instance, Job, Trace, completion_times, validate_trace, wc_max
from .numerics import Kind, ratio_constant
from .offline import eval_order, optimal_wc_max
from .policies import llw_policy, lw_policy, make_policy, phase_end

__all__ = [
    "FuzzConfig", "Instance", "Job", "Kind", "Trace", "adversary_report", "completion_times",
    "eval_order", "figure1_instance", "fuzz", "general_lb_adversary", "llw_policy", "lw_policy",
    "make_policy", "optimal_wc_max", "phase_end", "ratio_constant", "simulate",
    "simulate_adaptive", "tightness_instance", "unit_lb_adversary", "validate_trace",
    "verify_constants", "wc_max",
]
