"""Truncations of local zeta functions of rings, two independent ways.

The enumeration side (`latticezeta`, `repzeta`, `igusa`) counts subrings,
ideals and twist-isoclasses by exhaustive canonical-form iteration; the
closed-form side (`ratfun`, `cones`, `coxeter`) expands exact bivariate
rational functions, cone generating functions and functional-equation
identities.  Each side is the other's oracle; the acceptance suite holds
them to exact integer agreement.
"""

__version__ = "0.1.0"
