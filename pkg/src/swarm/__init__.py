"""
Swarm - Parallel evaluation of sweep grids
"""
from .sweep_orchestrator import SweepOrchestrator
