"""Seeded simulator for the SRTA RFID authentication protocol and an improved variant."""

from .config import ScenarioConfig, load
from .sim import World, replay, run_session

__all__ = ["ScenarioConfig", "load", "World", "replay", "run_session"]
__version__ = "0.1.0"
