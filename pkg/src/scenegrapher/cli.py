"""Command line entry points: serve, validate, render, convert, vocab build."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .errors import GraphError
from .layout import LayoutConfig
from .serialization import export_sg2im, parse_json, render_svg
from .vocabulary import build_from_corpus, save_tsv


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except GraphError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scenegrapher", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", help="JSON config file")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.add_argument("--store-dir")
    serve.add_argument("--image-dir")
    serve.add_argument("--ui-dir")
    serve.add_argument("--min-sep", type=float)
    serve.add_argument("--row-height", type=float)
    serve.add_argument("--origin-x", type=float)
    serve.add_argument("--origin-y", type=float)
    serve.add_argument("--compaction-interval", type=int)
    serve.add_argument("--no-fsync", action="store_true", help="skip fsync after log appends")
    serve.set_defaults(handler=_serve)

    validate = sub.add_parser("validate", help="check a graph document")
    validate.add_argument("file")
    validate.set_defaults(handler=_validate)

    render = sub.add_parser("render", help="render a graph document to SVG")
    render.add_argument("file")
    render.add_argument("-o", "--output", help="output path (default: stdout)")
    render.add_argument("--min-sep", type=float, default=40.0)
    render.add_argument("--row-height", type=float, default=80.0)
    render.add_argument("--origin-x", type=float, default=0.0)
    render.add_argument("--origin-y", type=float, default=0.0)
    render.set_defaults(handler=_render)

    convert = sub.add_parser("convert", help="convert a graph document to another format")
    convert.add_argument("file")
    convert.add_argument("--to", choices=["sg2im"], required=True)
    convert.add_argument("-o", "--output", help="output path (default: stdout)")
    convert.set_defaults(handler=_convert)

    vocab = sub.add_parser("vocab", help="vocabulary tools")
    vocab_sub = vocab.add_subparsers(dest="vocab_command", required=True)
    build = vocab_sub.add_parser("build", help="build frequency lists from a corpus directory")
    build.add_argument("directory")
    build.add_argument("--out", default=".", help="directory for attributes.tsv / predicates.tsv")
    build.set_defaults(handler=_vocab_build)

    return parser


def _serve(args) -> int:
    import uvicorn

    from .service import create_app

    overrides = {
        "host": args.host,
        "port": args.port,
        "store_dir": args.store_dir,
        "image_dir": args.image_dir,
        "ui_dir": args.ui_dir,
        "min_sep": args.min_sep,
        "row_height": args.row_height,
        "origin_x": args.origin_x,
        "origin_y": args.origin_y,
        "compaction_interval": args.compaction_interval,
        "fsync": False if args.no_fsync else None,
    }
    config = load_config(args.config, overrides=overrides)
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
    return 0


def _validate(args) -> int:
    graph = parse_json(Path(args.file).read_bytes())
    attributes = sum(len(o.attributes) for o in graph.objects)
    print(
        f"{args.file}: OK — {len(graph.objects)} objects, {attributes} attributes, "
        f"{len(graph.relationships)} relationships ({graph.instance_count()} instances)"
    )
    return 0


def _render(args) -> int:
    graph = parse_json(Path(args.file).read_bytes())
    layout_config = LayoutConfig(
        min_sep=args.min_sep,
        row_height=args.row_height,
        origin=(args.origin_x, args.origin_y),
    )
    _write_output(render_svg(graph, layout_config), args.output)
    return 0


def _convert(args) -> int:
    graph = parse_json(Path(args.file).read_bytes())
    _write_output(export_sg2im(graph), args.output)
    return 0


def _vocab_build(args) -> int:
    records: list[dict] = []
    files = sorted(Path(args.directory).glob("*.json"))
    for path in files:
        loaded = json.loads(path.read_text(encoding="utf-8"))
        records.extend(loaded if isinstance(loaded, list) else [loaded])
    corpus = build_from_corpus(records, source=str(args.directory))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_tsv(corpus.attributes, out / "attributes.tsv")
    save_tsv(corpus.predicates, out / "predicates.tsv")
    print(
        f"scanned {len(files)} files, {len(records)} records "
        f"({corpus.skipped_records} skipped): "
        f"{len(corpus.attributes.entries)} attributes, "
        f"{len(corpus.predicates.entries)} predicates -> {out}"
    )
    return 0


def _write_output(data: bytes, output: str | None) -> None:
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


if __name__ == "__main__":
    sys.exit(main())
