from .export import plan_to_json_text, save_plan, waypoints_json, waypoints_wpl
from .grid import GridBuildError, PlanningGrid, build_grid
from .p2p import NodeLabel, PlanResult, launch_window, optimize, replan

__all__ = [
    "GridBuildError",
    "NodeLabel",
    "PlanResult",
    "PlanningGrid",
    "build_grid",
    "launch_window",
    "optimize",
    "plan_to_json_text",
    "replan",
    "save_plan",
    "waypoints_json",
    "waypoints_wpl",
]
