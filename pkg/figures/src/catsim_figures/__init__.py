"""Publication-style replicas of the simulation figures.

Stateless scripts that read the CSV artifacts written by the `catsim` CLI
and render images.  All physics numbers come from the input files; the
renderer only reshapes, transforms axes and styles.
"""

from .render import FIGURE_IDS, FigureRecipe, render

__all__ = ["FIGURE_IDS", "FigureRecipe", "render"]

__version__ = "0.1.0"
