from .app import create_app
from .store import MissionRecord, MissionStore, StateReport

__all__ = ["MissionRecord", "MissionStore", "StateReport", "create_app"]
