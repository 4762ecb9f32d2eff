"""Network-level planning model, solution mapping and analyses."""
from .analysis import (SensitivityPoint, SweepPoint, capex_sensitivity, local_point,
                       local_sweep, ordered_map, parse_range)
from .check import CheckReport, check_solution
from .costs import LAYERS, MODES, CostReport, CostStack, decompose_costs, local_lcoa_from_formulas
from .model import PlanningError, PlanningModel, build_model, single_mode_costs
from .output import solution_document, write_solution
from .scenarios import random_scenario, two_region
from .solution import PlanningSolution, RegionResult, SolveError, solve_configuration

__all__ = [
    "CheckReport", "CostReport", "CostStack", "LAYERS", "MODES", "PlanningError", "PlanningModel",
    "PlanningSolution", "RegionResult", "SensitivityPoint", "SolveError", "SweepPoint",
    "build_model", "capex_sensitivity", "check_solution", "decompose_costs", "local_lcoa_from_formulas",
    "local_point", "local_sweep", "ordered_map", "parse_range", "random_scenario",
    "single_mode_costs", "solution_document", "solve_configuration", "two_region", "write_solution",
]
