"""Command-line entry points.

    dccbench serve     run the HTTP workbench service
    dccbench mine      headless DCC listing (JSON lines on stdout)
    dccbench report    data-map figure + CSV + mined records to a directory
    dccbench evaluate  score a suite file against one checkpoint scorer
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import load_config
from .corpus import load_corpus
from .datamap import compute_coords
from .errors import WorkbenchError
from .estimate import ScorerEndpoint
from .evaluation import evaluate_suite, load_suite
from .mining import DccMiner, dccs_to_jsonl
from .neighbors import NeighborIndex
from .report import write_report
from .service import Workbench, create_app

_corpus_options = [
    click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False)),
    click.option("--embeddings", required=True, type=click.Path(exists=True, dir_okay=False)),
    click.option(
        "--checkpoints",
        required=True,
        multiple=True,
        type=click.Path(exists=True, dir_okay=False),
        help="Checkpoint prediction files, in checkpoint order (repeat the flag).",
    ),
    click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False)),
]


def _with_corpus_options(command):
    for option in reversed(_corpus_options):
        command = option(command)
    return command


def _build_session(dataset, embeddings, checkpoints, config_path):
    config = load_config(config_path)
    corpus = load_corpus(dataset, embeddings, list(checkpoints))
    coords = compute_coords(corpus, config.region)
    index = NeighborIndex(corpus)
    miner = DccMiner(corpus, coords, index, config.miner, config.display_neighbors)
    return config, corpus, coords, index, miner


@click.group()
def main():
    """Mine data-constrained counterfactuals and refine new ones."""


@main.command()
@_with_corpus_options
@click.option("--listen", default="127.0.0.1:8080", show_default=True, help="host:port")
@click.option(
    "--draft-log",
    default="drafts.log.jsonl",
    show_default=True,
    type=click.Path(dir_okay=False),
    help="Append-only event log for counterfactual drafts.",
)
@click.option("--static-dir", default=None, type=click.Path(file_okay=False))
def serve(dataset, embeddings, checkpoints, config_path, listen, draft_log, static_dir):
    """Run the workbench HTTP service."""
    import uvicorn

    config = load_config(config_path)
    workbench = Workbench.from_paths(
        dataset, embeddings, list(checkpoints), config, draft_log
    )
    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if bundled.is_dir():
            static_dir = str(bundled)
    app = create_app(workbench, static_dir=static_dir)
    host, _, port = listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080))


@main.command()
@_with_corpus_options
def mine(dataset, embeddings, checkpoints, config_path):
    """Print the mined DCC records as JSON lines."""
    _, _, _, _, miner = _build_session(dataset, embeddings, checkpoints, config_path)
    sys.stdout.write(dccs_to_jsonl(miner.mine()))


@main.command()
@_with_corpus_options
@click.option("--out-dir", default="report", show_default=True, type=click.Path(file_okay=False))
def report(dataset, embeddings, checkpoints, config_path, out_dir):
    """Render the data-map figure and write coords.csv / dccs.jsonl."""
    _, corpus, coords, _, miner = _build_session(dataset, embeddings, checkpoints, config_path)
    paths = write_report(coords, corpus, miner.mine(), out_dir)
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


@main.command()
@click.option("--suite", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--scorer", required=True, help="Scorer target: URL or mock:<seed>.")
def evaluate(suite, scorer):
    """Evaluate a suite file and print the accuracy report as JSON."""
    items = load_suite(suite)
    report_obj = evaluate_suite(items, ScorerEndpoint(0, scorer))
    click.echo(json.dumps(report_obj.to_dict(), indent=2))


def cli_main():
    try:
        main(standalone_mode=True)
    except WorkbenchError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    cli_main()
