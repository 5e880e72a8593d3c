"""Command line entry point: run the HTTP service."""

from __future__ import annotations

import logging

import click
import uvicorn

from .fixtures import seed_demo as seed_demo_projects
from .server import create_app
from .store import ProjectStore

DEFAULT_PORT = 8787
DEFAULT_DATA_DIR = "./fusalens-data"


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--port",
    type=int,
    default=DEFAULT_PORT,
    envvar="FUSALENS_PORT",
    show_default=True,
    show_envvar=True,
    help="Port to listen on.",
)
@click.option("--host", default="127.0.0.1", show_default=True, help="Interface to bind.")
@click.option(
    "--data-dir",
    type=click.Path(file_okay=False),
    default=DEFAULT_DATA_DIR,
    envvar="FUSALENS_DATA_DIR",
    show_default=True,
    show_envvar=True,
    help="Directory holding committed projects.",
)
@click.option(
    "--log-level",
    type=click.Choice(["debug", "info", "warning", "error"], case_sensitive=False),
    default="info",
    show_default=True,
    help="Logging verbosity.",
)
@click.option(
    "--seed-demo",
    is_flag=True,
    help="Commit the bundled demo projects before serving (skips existing ones).",
)
@click.option(
    "--ui-dir",
    type=click.Path(exists=True, file_okay=False),
    default=None,
    help="Serve a static frontend build from this directory at /.",
)
def main(port: int, host: str, data_dir: str, log_level: str, seed_demo: bool, ui_dir: str | None):
    """Run the functional-safety workbench service."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    store = ProjectStore(data_dir)
    if seed_demo:
        committed = seed_demo_projects(store)
        click.echo(f"seeded demo projects: {', '.join(committed) or 'none (already present)'}")
    app = create_app(store, ui_dir=ui_dir)
    click.echo(f"serving on http://{host}:{port} (data dir: {store.data_dir})")
    uvicorn.run(app, host=host, port=port, log_level=log_level.lower())


if __name__ == "__main__":
    main()
