"""
Experiments app - figure reproductions, parameter sweeps and their outputs
"""
