"""Encirclement-guaranteed cooperative pursuit toolkit.

Subpackages cover 2D convex geometry (``geom2d``), angle-based sector
partitions (``partition``), a dense convex QP solver (``qp``), tube MPC for
the pursuer/evader relative dynamics (``tmpc``), team and evader policies
(``policies``), the discrete-time game engine (``sim``), a command-line
front end (``cli``) and a live session service (``service``).
"""

__version__ = "0.1.0"
