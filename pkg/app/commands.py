"""
Click commands, one per pipeline stage plus the synthetic data generator.
"""
import logging
from typing import Tuple

import click

import config
from domain.entities import ExportFormat, Linkage, MissingDataPolicy
from domain.exceptions import TaxonomyError
from domain.value_objects import BlockSpec, RunConfig, SymbolInfo

logger = logging.getLogger(__name__)

LINKAGE_CHOICES = {
    "single": (Linkage.SINGLE,),
    "average": (Linkage.AVERAGE,),
    "both": (Linkage.SINGLE, Linkage.AVERAGE),
}


def get_service(service_name: str):
    """Get a service from the click context."""
    return click.get_current_context().obj['SERVICES'][service_name]


def split_list(value: str) -> Tuple[str, ...]:
    return tuple(item.strip() for item in value.split(",") if item.strip())


def parse_formats(ctx, param, value: str) -> Tuple[ExportFormat, ...]:
    try:
        return tuple(ExportFormat(item.lower()) for item in split_list(value))
    except ValueError:
        raise click.BadParameter(
            f"expected a comma list of {', '.join(f.value for f in ExportFormat)}, got {value!r}"
        )


def parse_blocks(ctx, param, value: str) -> Tuple[Tuple[str, int], ...]:
    blocks = []
    for item in split_list(value):
        prefix, _, size = item.partition(":")
        if not prefix or not size.isdigit():
            raise click.BadParameter(f"expected PREFIX:SIZE items, got {item!r}")
        blocks.append((prefix, int(size)))
    return tuple(blocks)


def pipeline_options(command):
    """Options shared by every pipeline stage."""
    options = [
        click.option("--input", "input_path", required=True, help="Wide monthly price CSV."),
        click.option("--out", "output_directory", default=config.OUTPUT_DIRECTORY,
                     show_default=True, help="Output directory."),
        click.option("--tau", type=click.IntRange(min=1), default=config.DEFAULT_TAU,
                     show_default=True, help="Return horizon in months."),
        click.option("--linkage", type=click.Choice(sorted(LINKAGE_CHOICES)),
                     default=config.DEFAULT_LINKAGE, show_default=True),
        click.option("--replicas", type=click.IntRange(min=0), default=config.DEFAULT_REPLICAS,
                     show_default=True, help="Bootstrap replicas (0 skips the bootstrap)."),
        click.option("--seed", type=int, default=config.DEFAULT_SEED, show_default=True),
        click.option("--symbols", default="", help="Comma list restricting the analysis."),
        click.option("--format", "formats", default=config.DEFAULT_FORMATS, show_default=True,
                     callback=parse_formats, help="Comma list of dot,json,newick,csv."),
        click.option("--metadata", "metadata_path", default=None,
                     help="Sidecar CSV with symbol,continent,name."),
        click.option("--missing", type=click.Choice(["listwise", "strict"]),
                     default=config.DEFAULT_MISSING_POLICY, show_default=True),
        click.option("--drop-constant", is_flag=True, help="Drop zero-variance series."),
        click.option("--clusters", type=click.IntRange(min=1), default=None,
                     help="Also cut each hierarchical tree into K clusters."),
        click.option("--workers", type=click.IntRange(min=1), default=config.BOOTSTRAP_WORKERS,
                     show_default=True,
                     help="Bootstrap worker threads."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def stage_command(group: click.Group, stage: str, help_text: str):
    """Register a pipeline stage as a subcommand."""

    @group.command(stage, help=help_text)
    @pipeline_options
    @click.pass_context
    def command(ctx, input_path, output_directory, tau, linkage, replicas, seed, symbols,
                formats, metadata_path, missing, drop_constant, clusters, workers):
        try:
            run_config = RunConfig(
                input_path=input_path,
                output_directory=output_directory,
                tau=tau,
                linkages=LINKAGE_CHOICES[linkage],
                replicas=replicas,
                seed=seed,
                symbols=split_list(symbols),
                missing_policy=MissingDataPolicy(missing),
                formats=formats,
                metadata_path=metadata_path,
                drop_constant=drop_constant,
                clusters=clusters,
                workers=workers,
            )
        except TaxonomyError as e:
            logger.error("%s failed: %s", stage, e)
            ctx.exit(e.exit_code)
        code = get_service('pipeline_service').run_pipeline(run_config, stage)
        if code == 0:
            click.echo(f"{stage}: artifacts written to {output_directory}")
        ctx.exit(code)

    return command


def register_commands(cli: click.Group) -> None:
    """Register all subcommands."""
    stage_command(cli, "returns", "Compute aligned log returns.")
    stage_command(cli, "corr", "Write correlation and distance matrices.")
    stage_command(cli, "mst", "Build the minimal spanning tree.")
    stage_command(cli, "tree", "Build single- and/or average-linkage hierarchical trees.")
    stage_command(cli, "boot", "Bootstrap the reliability of MST links.")
    stage_command(cli, "run", "Run every stage.")

    @cli.command("gen")
    @click.option("--blocks", callback=parse_blocks, default="A:5,B:5,C:5", show_default=True,
                  help="Comma list of PREFIX:SIZE blocks.")
    @click.option("--intra", type=float, default=0.9, show_default=True,
                  help="Within-block correlation.")
    @click.option("--inter", type=float, default=0.0, show_default=True,
                  help="Between-block correlation.")
    @click.option("--rows", type=click.IntRange(min=2), default=500, show_default=True,
                  help="Number of returns (prices get one more row).")
    @click.option("--seed", type=int, default=config.DEFAULT_SEED, show_default=True)
    @click.option("--volatility", type=float, default=0.05, show_default=True)
    @click.option("--out", "output_path", required=True, help="Price CSV to write.")
    @click.option("--metadata", "metadata_path", default=None,
                  help="Also write a sidecar with the block label as continent.")
    @click.pass_context
    def gen(ctx, blocks, intra, inter, rows, seed, volatility, output_path, metadata_path):
        """Generate a planted block-correlation price dataset."""
        synthetic_service = get_service('synthetic_service')
        try:
            spec = BlockSpec(blocks=blocks, intra_rho=intra, inter_rho=inter, rows=rows,
                             seed=seed, volatility=volatility)
            prices = synthetic_service.prices_from_returns(synthetic_service.generate_block_model(spec))
            get_service('price_repo').save(prices, output_path)
            if metadata_path:
                metadata = {
                    symbol: SymbolInfo(symbol=symbol, continent=label)
                    for symbol, label in zip(spec.symbols, spec.labels)
                }
                get_service('metadata_repo').save(metadata, metadata_path)
        except TaxonomyError as e:
            logger.error("gen failed: %s", e)
            ctx.exit(e.exit_code)
        except OSError as e:
            logger.error("gen failed: %s", e)
            ctx.exit(3)
        click.echo(f"gen: wrote {prices.n_dates} months x {prices.n_symbols} series to {output_path}")
