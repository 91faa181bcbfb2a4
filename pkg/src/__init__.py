"""
Critical Intermittency Lab
Random iterations of two rational maps with a common repelling fixed point
"""

__version__ = "1.0.0"
__description__ = "Numerical laboratory for critical intermittency in random iterations of rational maps"
