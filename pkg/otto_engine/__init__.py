"""
Otto Engine
===========
Exact and sampled work, heat and efficiency statistics of quantum Otto
engines under two projective energy measurements, with the driven spin-1/2
engine as a closed-form reference.
"""

__version__ = "1.0.0"
