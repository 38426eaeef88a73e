"""python -m catsim_figures <figure-id> --in data.csv --out fig.png"""

import argparse
import sys

from .render import FIGURE_IDS, ColumnMismatchError, FigureRecipe, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="catsim_figures",
        description="Render figure replicas from catsim CSV artifacts.",
    )
    parser.add_argument("figure", choices=FIGURE_IDS)
    parser.add_argument("--in", dest="input_csv", required=True)
    parser.add_argument("--out", dest="output_path", required=True)
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)

    recipe = FigureRecipe(
        figure=args.figure,
        input_csv=args.input_csv,
        output_path=args.output_path,
        dpi=args.dpi,
        title=args.title,
    )
    try:
        render(recipe)
    except (ColumnMismatchError, OSError) as exc:
        print(f"catsim_figures {args.figure}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
