import logging
import sys
from functools import wraps

import click
import pandas as pd

from skelet import config
from skelet.core import compute_regions, parse_skel, serialize, validate
from skelet.core.errors import BudgetExceeded, MoveError, SkelFormatError, StructureError
from skelet.core.moves_format import parse_path, parse_sites, serialize_path, serialize_sites
from skelet.core.seeds import SEEDS, seed as make_seed
from skelet.core.sites import complex_hash
from skelet.core.validator import boundary_graph_type
from skelet.services.dual import dualize, is_orientable, octopus_signature, vertex_links, write_tri
from skelet.services.moves import apply_move, enumerate_all, replay
from skelet.services.search import Exhausted, SearchLimits, bfs_connect
from skelet.services.transform import scramble as scramble_complex
from skelet.services.transform import super_standardize
from skelet.utils.storage import storage


def setup_logging(level=None):
    logging.basicConfig(level=level or config.LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s', force=True)
    if config.LOG_FILE:
        handler = logging.FileHandler(config.LOG_FILE)
        handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
        logging.getLogger().addHandler(handler)


def _guard(command):
    """Maps library errors to the CLI exit codes."""
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except StructureError as e:
            click.echo(f"Invalid: {e}", err=True)
            sys.exit(config.EXIT_INVALID)
        except (SkelFormatError, OSError) as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(config.EXIT_USAGE)
        except BudgetExceeded as e:
            click.echo(f"Exhausted: {e}", err=True)
            sys.exit(config.EXIT_EXHAUSTED)
        except MoveError as e:
            click.echo(f"Rejected: {e}", err=True)
            sys.exit(config.EXIT_INVALID)
        except ValueError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(config.EXIT_USAGE)
    return wrapper


def _load(path):
    if not storage.exists(path):
        raise OSError(f"no such file: {path}")
    return parse_skel(storage.read_text(path))


def _kinds(text):
    kinds = [k.strip().upper() for k in text.split(",") if k.strip()]
    if not kinds:
        raise click.BadParameter("at least one move kind is required")
    return kinds


def _distinct(inputs, outputs):
    written = [p for p in outputs if p]
    if len(set(written)) != len(written) or set(written) & set(inputs):
        raise click.UsageError("output paths must differ from each other and from the inputs")


@click.group()
@click.option("--log-level", default=None, help="Overrides SKELET_LOG_LEVEL.")
def skelet(log_level):
    """Skeleta of 3-manifolds with marked boundary."""
    setup_logging(log_level)


@skelet.command(name="validate")
@click.argument("file")
@_guard
def validate_cmd(file):
    """Validate a SKEL file."""
    report = validate(_load(file))
    v, e, f, n = report.counts
    click.echo(f"counts V={v} E={e} F={f} n={n}")
    for i, summary in enumerate(report.boundary_summary):
        click.echo(f"boundary {i}: {summary[0]} / {summary[1]}" if summary else f"boundary {i}: -")
    for code, message in report.errors:
        click.echo(f"{code}: {message}")
    click.echo("ok" if report.ok else "invalid")
    sys.exit(config.EXIT_OK if report.ok else config.EXIT_INVALID)


@skelet.command()
@click.argument("file")
@_guard
def info(file):
    """Counts, regions, boundary summary and octopus signature."""
    complex_ = _load(file)
    regions = compute_regions(complex_)
    marked = set(complex_.marked_regions)
    df = pd.DataFrame({
        "region": [r.id for r in regions],
        "length": [r.length for r in regions],
        "marked": [r.id in marked for r in regions],
    })
    click.echo(f"{complex_.name}: V={complex_.vertex_count} E={complex_.edge_count} F={len(regions)} "
               f"n={complex_.n_marked} hash={complex_hash(complex_)}")
    click.echo(df.to_string(index=False))
    for i in range(complex_.n_marked):
        surface, graph = boundary_graph_type(complex_, i)
        click.echo(f"boundary {i}: {surface} / {graph}")
    dt = dualize(complex_, regions)
    links = vertex_links(dt)
    click.echo("links " + " ".join(f"({link.euler}, {'o' if link.orientable else 'n'})" for link in links))
    click.echo(f"orientable {'yes' if is_orientable(dt) else 'no'}")
    click.echo(f"octopus {octopus_signature(complex_, regions)}")


@skelet.command()
@click.argument("file")
@click.option("--kind", "kind", required=True, help="Move kinds, e.g. mp+ or mp,l or cr.")
@click.option("-o", "--out", default=None, help="Write the sites as a MOVES v1 document.")
@_guard
def sites(file, kind, out):
    """List applicable move sites."""
    _distinct([file], [out])
    complex_ = _load(file)
    found = enumerate_all(complex_, _kinds(kind))
    text = serialize_sites(found)
    if out:
        storage.write_text(text, out)
    click.echo(text, nl=False)
    click.echo(f"{len(found)} sites", err=True)


@skelet.command()
@click.argument("file")
@click.option("--sites", "sites_file", default=None, help="MOVES v1 site list.")
@click.option("--index", default=0, show_default=True, help="Which site of the list to apply.")
@click.option("--path", "path_file", default=None, help="MOVES v1 path to replay instead.")
@click.option("-o", "--out", required=True)
@_guard
def apply(file, sites_file, index, path_file, out):
    """Apply one site or replay a path."""
    _distinct([file, sites_file or "", path_file or ""], [out])
    complex_ = _load(file)
    if path_file:
        result = replay(complex_, parse_path(storage.read_text(path_file)))
    elif sites_file:
        listed = parse_sites(storage.read_text(sites_file))
        if not 0 <= index < len(listed):
            raise click.BadParameter(f"index {index} out of range ({len(listed)} sites)")
        result = apply_move(complex_, listed[index])
    else:
        raise click.UsageError("give --sites or --path")
    storage.write_text(serialize(result), out)
    click.echo(f"wrote {out}: V={result.vertex_count} hash={complex_hash(result)}")


@skelet.command()
@click.argument("file")
@click.option("-k", "k", type=int, required=True)
@click.option("--kinds", default="mp,l", show_default=True)
@click.option("--seed", "rng_seed", type=int, default=0, show_default=True)
@click.option("-o", "--out", required=True)
@click.option("--path", "path_out", default=None)
@_guard
def scramble(file, k, kinds, rng_seed, out, path_out):
    """Apply k random moves."""
    _distinct([file], [out, path_out])
    result, path, truncated = scramble_complex(_load(file), k, _kinds(kinds), rng_seed)
    storage.write_text(serialize(result), out)
    if path_out:
        storage.write_text(serialize_path(path), path_out)
    click.echo(f"{len(path)} moves, V={result.vertex_count}" + (" (truncated)" if truncated else ""))


@skelet.command()
@click.argument("file")
@click.option("-o", "--out", required=True)
@click.option("--path", "path_out", default=None)
@click.option("--budget", type=int, default=None, help="Search expansion budget (default 10 V + 100).")
@_guard
def superstd(file, out, path_out, budget):
    """Transform into a super-standard skeleton."""
    _distinct([file], [out, path_out])
    result, path = super_standardize(_load(file), budget)
    storage.write_text(serialize(result), out)
    if path_out:
        storage.write_text(serialize_path(path), path_out)
    click.echo(f"super-standard after {len(path)} moves, V={result.vertex_count}")


@skelet.command()
@click.argument("a")
@click.argument("b")
@click.option("--kinds", default="mp,l", show_default=True)
@click.option("--max-depth", type=int, default=config.MAX_DEPTH, show_default=True)
@click.option("--max-nodes", type=int, default=config.MAX_NODES, show_default=True)
@click.option("--max-seconds", type=float, default=config.MAX_SECONDS, show_default=True)
@click.option("--jobs", type=int, default=config.JOBS, show_default=True)
@click.option("--path", "path_out", default=None)
@_guard
def connect(a, b, kinds, max_depth, max_nodes, max_seconds, jobs, path_out):
    """Search a move path from A to B."""
    _distinct([a, b], [path_out])
    try:
        limits = SearchLimits(max_depth, max_nodes, max_seconds, jobs)
    except ValueError as e:
        raise click.BadParameter(str(e))
    result = bfs_connect(_load(a), _load(b), _kinds(kinds), limits)
    if isinstance(result, Exhausted):
        click.echo(str(result))
        sys.exit(config.EXIT_EXHAUSTED)
    if path_out:
        storage.write_text(serialize_path(result), path_out)
    click.echo(f"path of {len(result)} moves")


@skelet.command()
@click.argument("file")
@click.option("-o", "--out", default=None)
@_guard
def dual(file, out):
    """Write the dual ideal triangulation (TRI v1)."""
    _distinct([file], [out])
    text = write_tri(dualize(_load(file)))
    if out:
        storage.write_text(text, out)
    click.echo(text, nl=False)


@skelet.command()
@click.argument("file")
@_guard
def octopus(file):
    """Print the Z/2 octopus signature."""
    click.echo(str(octopus_signature(_load(file))))


@skelet.command()
@click.argument("name", type=click.Choice(sorted(SEEDS)))
@click.option("-o", "--out", default=None)
@_guard
def seed(name, out):
    """Write a built-in seed complex."""
    text = serialize(make_seed(name))
    if out:
        storage.write_text(text, out)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


def main():
    skelet()


if __name__ == "__main__":
    main()
