"""
Lipkin - Ground-state order parameters and 2-RDM geometry of the LMG model
"""
__version__ = "0.1.0"
